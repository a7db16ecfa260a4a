#pragma once

#include <array>
#include <map>
#include <string>

#include "seqplan/scene.hpp"

namespace seqplan {

/// Per-axis penalties for the 6-D pose delta (x, y, z, roll, pitch, yaw).
/// Rotational components use intrinsic XYZ Euler angles of the delta
/// rotation relative to the first sample.
struct Weights {
  std::array<double, 6> w{1.0, 1.0, 1.0, 1.0, 1.0, 1.0};

  static Weights ones() { return Weights{}; }
  bool is_identity() const;
  void validate() const;  // finite and non-negative, throws ValidationError

  double operator[](std::size_t i) const { return w[i]; }
};

struct WeightedPoseResult {
  Pose pose;
  /// Set when the pitch of the delta rotation exceeds 80 degrees, where
  /// the Euler decomposition loses precision. Non-fatal.
  bool gimbal_warning = false;
};

/// Scales the pose delta pi - p0 componentwise: translation per axis,
/// rotation per intrinsic XYZ Euler angle of p0⁻¹·pi. With identity
/// weights the input pose is returned unchanged.
WeightedPoseResult weighted_pose(const Pose& p0, const Pose& pi,
                                 const Weights& w);

/// Euclidean distance between the last and first sample positions.
double pose_shift(const Trajectory& traj);

/// Sum of consecutive sample position distances.
double path_length(const Trajectory& traj);

/// Ratio of the hull volume of the accumulated sample clouds over the
/// trajectory to the initial hull volume. >= 1 for any trajectory;
/// exactly 1 when the object never moves.
double swept_convex_volume(const Shape& shape, const Trajectory& traj);

/// Weighted variant: every pose is first re-expressed through
/// weighted_pose relative to the first sample, then sampled.
double swept_convex_volume(const Shape& shape, const Trajectory& traj,
                           const Weights& w);

struct PerObjectCosts {
  double pose_shift = 0.0;
  double path_length = 0.0;
  double scv = 1.0;
  double weighted_scv = 1.0;
};

/// Episode cost summary. Each c_* is the maximum of its per-object column
/// over the passive objects; argmax_* names the object attaining it.
struct CostReport {
  double c_p = 0.0;  // max pose shift
  double c_l = 0.0;  // max path length
  double c_v = 1.0;  // max swept convex volume
  double c_w = 1.0;  // max weighted swept convex volume
  std::map<std::string, PerObjectCosts> per_object;
  std::string argmax_pose_shift;
  std::string argmax_path_length;
  std::string argmax_scv;
  std::string argmax_weighted_scv;
};

/// Evaluates all four cost functions over the episode's passive objects
/// (everything except active_id). A passive object that left the
/// workspace forces c_w to +infinity.
CostReport evaluate_costs(const EpisodeResult& result,
                          const std::string& active_id, const Weights& w);

}  // namespace seqplan
