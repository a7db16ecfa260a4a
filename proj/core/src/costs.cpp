#include "seqplan/costs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace seqplan {
namespace {

constexpr double kGimbalPitchDeg = 80.0;

/// Intrinsic XYZ Euler angles (roll, pitch, yaw) of q, i.e. the unique
/// (φ, θ, ψ) with q = Rx(φ) Ry(θ) Rz(ψ) and θ in [-π/2, π/2].
Vec3 euler_xyz(const Quat& q) {
  Mat3 m = q.toRotationMatrix();
  double s = std::clamp(m(0, 2), -1.0, 1.0);
  double pitch = std::asin(s);
  double roll = std::atan2(-m(1, 2), m(2, 2));
  double yaw = std::atan2(-m(0, 1), m(0, 0));
  return Vec3(roll, pitch, yaw);
}

Quat from_euler_xyz(const Vec3& rpy) {
  return Quat(Eigen::AngleAxisd(rpy.x(), Vec3::UnitX()) *
              Eigen::AngleAxisd(rpy.y(), Vec3::UnitY()) *
              Eigen::AngleAxisd(rpy.z(), Vec3::UnitZ()));
}

void require_samples(const Trajectory& traj) {
  if (traj.samples.empty()) {
    throw ValidationError("trajectory has no samples");
  }
}

}  // namespace

bool Weights::is_identity() const {
  for (double v : w) {
    if (v != 1.0) return false;
  }
  return true;
}

void Weights::validate() const {
  for (double v : w) {
    if (!std::isfinite(v) || v < 0.0) {
      throw ValidationError("weights must be finite and non-negative");
    }
  }
}

WeightedPoseResult weighted_pose(const Pose& p0, const Pose& pi,
                                 const Weights& w) {
  // Identity weights return pi untouched so the weighted path is
  // bit-identical to the unweighted one.
  if (w.is_identity()) {
    return WeightedPoseResult{pi, false};
  }
  WeightedPoseResult out;
  Vec3 dp = pi.position - p0.position;
  out.pose.position =
      p0.position + Vec3(w[0] * dp.x(), w[1] * dp.y(), w[2] * dp.z());

  Quat delta = p0.orientation.conjugate() * pi.orientation;
  Vec3 rpy = euler_xyz(delta);
  out.gimbal_warning =
      std::abs(rpy.y()) > kGimbalPitchDeg * std::numbers::pi / 180.0;
  Vec3 scaled(w[3] * rpy.x(), w[4] * rpy.y(), w[5] * rpy.z());
  out.pose.orientation = p0.orientation * from_euler_xyz(scaled);
  return out;
}

double pose_shift(const Trajectory& traj) {
  require_samples(traj);
  return (traj.last().position - traj.first().position).norm();
}

double path_length(const Trajectory& traj) {
  require_samples(traj);
  double total = 0.0;
  for (std::size_t i = 1; i < traj.samples.size(); ++i) {
    total += (traj.samples[i].pose.position -
              traj.samples[i - 1].pose.position)
                 .norm();
  }
  return total;
}

static double swept_volume_impl(const Shape& shape, const Trajectory& traj,
                                const Weights* w) {
  require_samples(traj);
  const Pose& p0 = traj.samples.front().pose;
  PointCloud base = sample_shape(shape, p0);

  double v0 = 0.0;
  try {
    v0 = hull_volume(convex_hull(base));
  } catch (const DegenerateInput&) {
    throw DegenerateInitialHull("initial sample cloud has zero volume");
  }

  PointCloud swept = base;
  swept.points.reserve(base.size() * traj.samples.size());
  for (std::size_t i = 1; i < traj.samples.size(); ++i) {
    Pose target = traj.samples[i].pose;
    if (w != nullptr) {
      target = weighted_pose(p0, target, *w).pose;
    }
    swept.append(transform_cloud(base, p0, target));
  }
  return hull_volume(convex_hull(swept)) / v0;
}

double swept_convex_volume(const Shape& shape, const Trajectory& traj) {
  return swept_volume_impl(shape, traj, nullptr);
}

double swept_convex_volume(const Shape& shape, const Trajectory& traj,
                           const Weights& w) {
  if (w.is_identity()) {
    return swept_volume_impl(shape, traj, nullptr);
  }
  return swept_volume_impl(shape, traj, &w);
}

CostReport evaluate_costs(const EpisodeResult& result,
                          const std::string& active_id, const Weights& w) {
  w.validate();
  CostReport report;

  for (const SceneObject& obj : result.final_scene.objects) {
    if (obj.id == active_id) continue;
    auto it = result.trajectories.find(obj.id);
    if (it == result.trajectories.end()) {
      throw ValidationError("missing trajectory for passive object " +
                            obj.id);
    }
    const Trajectory& traj = it->second;

    PerObjectCosts c;
    c.pose_shift = pose_shift(traj);
    c.path_length = path_length(traj);
    try {
      c.scv = swept_convex_volume(obj.shape, traj);
      c.weighted_scv = swept_convex_volume(obj.shape, traj, w);
    } catch (const DegenerateInitialHull&) {
      c.scv = 0.0;
      c.weighted_scv = 0.0;
    }
    report.per_object.emplace(obj.id, c);
  }

  // Column maxima over the id-sorted map: ties go to the smallest id.
  if (!report.per_object.empty()) {
    double inf = std::numeric_limits<double>::infinity();
    double mp = -inf, ml = -inf, mv = -inf, mw = -inf;
    for (const auto& [id, c] : report.per_object) {
      if (c.pose_shift > mp) {
        mp = c.pose_shift;
        report.argmax_pose_shift = id;
      }
      if (c.path_length > ml) {
        ml = c.path_length;
        report.argmax_path_length = id;
      }
      if (c.scv > mv) {
        mv = c.scv;
        report.argmax_scv = id;
      }
      if (c.weighted_scv > mw) {
        mw = c.weighted_scv;
        report.argmax_weighted_scv = id;
      }
    }
    report.c_p = mp;
    report.c_l = ml;
    report.c_v = mv;
    report.c_w = mw;
  }

  if (!result.flags.out_of_workspace.empty()) {
    report.c_w = std::numeric_limits<double>::infinity();
    report.argmax_weighted_scv = *result.flags.out_of_workspace.begin();
  }
  return report;
}

}  // namespace seqplan
