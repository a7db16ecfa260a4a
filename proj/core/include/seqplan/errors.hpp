#pragma once

#include <stdexcept>
#include <string>

namespace seqplan {

/// Base class for every error raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input points span fewer than three dimensions; the hull has zero volume.
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

/// The first trajectory sample produces a zero-volume hull, so the swept
/// volume ratio is undefined.
class DegenerateInitialHull : public Error {
 public:
  using Error::Error;
};

/// A manipulation action references an unknown object or carries an empty
/// or inconsistent waypoint list.
class InvalidAction : public Error {
 public:
  using Error::Error;
};

/// No collision-free grasp candidate exists for the requested object.
class NoFeasibleGrasp : public Error {
 public:
  using Error::Error;
};

/// The scene holds more objects than the planner's configured cap.
class RefusesLargeScene : public Error {
 public:
  using Error::Error;
};

/// A structurally well-formed input violates a semantic invariant
/// (duplicate ids, non-positive extents, bad ranges, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text. Carries the 1-based line and column of the
/// first offending character when known (0 when unknown).
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column)
      : Error(message), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_ = 0;
  int column_ = 0;
};

}  // namespace seqplan
