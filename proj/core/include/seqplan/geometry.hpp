#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <array>
#include <variant>
#include <vector>

#include "seqplan/errors.hpp"

namespace seqplan {

using Vec3 = Eigen::Vector3d;
using Quat = Eigen::Quaterniond;
using Mat3 = Eigen::Matrix3d;

/// Rigid transform in 3-D: a rotation followed by a translation.
struct Pose {
  Vec3 position{0.0, 0.0, 0.0};
  Quat orientation{1.0, 0.0, 0.0, 0.0};

  static Pose identity() { return Pose{}; }

  /// Maps a point given in this pose's local frame into the world frame.
  Vec3 apply(const Vec3& p) const { return orientation * p + position; }

  Pose inverse() const {
    Quat qi = orientation.conjugate();
    return Pose{qi * (-position), qi};
  }

  /// Composition: (*this) applied after rhs, i.e. world = this ∘ rhs.
  Pose operator*(const Pose& rhs) const {
    return Pose{orientation * rhs.position + position,
                orientation * rhs.orientation};
  }

  /// True when the orientation norm is within tol of 1.
  bool has_unit_orientation(double tol = 1e-9) const;
};

/// Smallest rotation angle (radians) taking orientation a to b.
double quat_angle(const Quat& a, const Quat& b);

struct Box {
  Vec3 half_extents{0.5, 0.5, 0.5};
};

struct Cylinder {
  double radius = 0.5;
  double half_height = 0.5;  // axis is local +z
};

/// Number of circumference samples per cylinder cap ring.
inline constexpr int kCylinderRingSamples = 32;

/// Convex rigid primitive: an axis-aligned box (in its local frame) or a
/// z-axis cylinder. Construction validates strictly positive extents.
class Shape {
 public:
  static Shape box(const Vec3& half_extents);
  static Shape cylinder(double radius, double half_height);

  bool is_box() const { return std::holds_alternative<Box>(data_); }
  bool is_cylinder() const { return std::holds_alternative<Cylinder>(data_); }
  const Box& as_box() const { return std::get<Box>(data_); }
  const Cylinder& as_cylinder() const { return std::get<Cylinder>(data_); }

  /// Exact solid volume of the primitive.
  double volume() const;

  /// Principal moments of inertia in the local frame for the given mass,
  /// assuming uniform density.
  Vec3 inertia_diagonal(double mass) const;

  /// Hull-defining sample points in the local frame: the 8 corners of a
  /// box, or two rings of kCylinderRingSamples points at the cap edges.
  std::vector<Vec3> local_samples() const;

  /// Support extent: max over the shape of dir·(R p) for unit dir, i.e.
  /// the reach of the oriented shape from its centroid along dir.
  double support_extent(const Quat& orientation, const Vec3& dir) const;

 private:
  explicit Shape(Box b) : data_(b) {}
  explicit Shape(Cylinder c) : data_(c) {}
  std::variant<Box, Cylinder> data_;
};

struct PointCloud {
  std::vector<Vec3> points;

  std::size_t size() const { return points.size(); }
  void append(const PointCloud& other) {
    points.insert(points.end(), other.points.begin(), other.points.end());
  }
};

/// Watertight triangulated convex polyhedron. Faces are index triples into
/// vertices wound counter-clockwise when seen from outside.
struct Polyhedron {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;
};

/// Samples the shape surface at the given pose; the returned cloud spans
/// the convex hull of the primitive (cylinders are hulled by their cap
/// rings, so the hull is the inscribed prism of the cap polygon).
PointCloud sample_shape(const Shape& shape, const Pose& pose);

/// Deterministic incremental convex hull. Points are inserted in index
/// order with index-based tie-breaking, so identical input order yields an
/// identical hull. Throws DegenerateInput when the cloud spans fewer than
/// three dimensions.
Polyhedron convex_hull(const PointCloud& cloud);

/// Volume by signed tetrahedron sum over the triangulated surface.
double hull_volume(const Polyhedron& poly);

/// Rigidly re-expresses a cloud captured at pose `from` at pose `to`,
/// i.e. applies to ∘ from⁻¹ to every point.
PointCloud transform_cloud(const PointCloud& cloud, const Pose& from,
                           const Pose& to);

/// Largest signed distance from p to any face plane of the hull;
/// non-positive values mean p lies inside (or on) the hull.
double hull_signed_distance(const Polyhedron& poly, const Vec3& p);

}  // namespace seqplan
