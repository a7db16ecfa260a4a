#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "seqplan/geometry.hpp"

namespace seqplan {

/// A rigid object the robot may manipulate.
struct SceneObject {
  std::string id;
  Shape shape = Shape::box(Vec3(0.05, 0.05, 0.05));
  Pose pose;
  double mass = 1.0;         // kg, strictly positive
  double friction = 0.6;     // Coulomb coefficient, [0, 2]
  double restitution = 0.0;  // [0, 1]
};

/// Immovable collision geometry: container walls, shelf boards, the floor.
struct StaticGeometry {
  Shape shape = Shape::box(Vec3(0.5, 0.5, 0.5));
  Pose pose;
};

struct Aabb {
  Vec3 min{0.0, 0.0, 0.0};
  Vec3 max{0.0, 0.0, 0.0};

  bool contains(const Vec3& p) const {
    return p.x() >= min.x() && p.x() <= max.x() && p.y() >= min.y() &&
           p.y() <= max.y() && p.z() >= min.z() && p.z() <= max.z();
  }
  Vec3 extent() const { return max - min; }
};

/// A complete workspace snapshot. Objects are kept sorted by id and ids are
/// unique; every deterministic iteration in the library relies on that
/// canonical order.
struct Scene {
  std::vector<SceneObject> objects;
  std::vector<StaticGeometry> statics;
  Aabb workspace;
  Vec3 gravity{0.0, 0.0, -9.81};

  const SceneObject* find(const std::string& id) const;
  bool has(const std::string& id) const { return find(id) != nullptr; }
  std::vector<std::string> object_ids() const;

  /// Sorts objects by id and checks all invariants; throws ValidationError.
  void canonicalize();
  void validate() const;
};

struct TrajectorySample {
  double t = 0.0;
  Pose pose;
};

/// Pose samples of one object over an episode, at a fixed sampling period
/// (plus possibly one trailing off-grid sample at the episode end).
struct Trajectory {
  std::string object_id;
  std::vector<TrajectorySample> samples;
  double sample_period = 0.0;

  const Pose& first() const { return samples.front().pose; }
  const Pose& last() const { return samples.back().pose; }
};

/// A grasp-and-extract action: the gripper sweeps through `approach`
/// (ending at grasp_pose), rigidly attaches the object, then sweeps
/// through `extraction` (starting at grasp_pose) and releases.
struct ManipulationPlan {
  std::string object_id;
  Pose grasp_pose;
  std::vector<Pose> approach;
  std::vector<Pose> extraction;
};

struct EpisodeFlags {
  /// The active object drifted beyond the grasp tolerance before the
  /// gripper reached it, so it was never attached.
  bool active_unreachable = false;
  /// Passive objects whose centroid left the workspace box at some
  /// recorded sample. The active object is exempt: its exit is the
  /// intended unload.
  std::set<std::string> out_of_workspace;
  /// Whether the scene reached rest within the settling budget.
  bool settled = false;
};

/// What one simulated removal episode produced.
struct EpisodeResult {
  std::map<std::string, Trajectory> trajectories;
  Scene final_scene;
  EpisodeFlags flags;
};

}  // namespace seqplan
