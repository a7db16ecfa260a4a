#pragma once

#include <memory>
#include <utility>

#include "seqplan/scene.hpp"

namespace seqplan {

/// Fixed-timestep simulation parameters. Everything that shapes the
/// deterministic contact model lives here so runs are reproducible from
/// the config alone.
struct SimConfig {
  double dt = 1.0 / 240.0;      // integration step, must be <= 1/60
  int solver_iterations = 16;   // sequential impulse sweeps per step
  double sample_hz = 60.0;      // trajectory recording rate

  double contact_margin = 1e-3;         // generate contacts within this gap
  double slop = 5e-4;                   // tolerated penetration
  double baumgarte = 0.2;               // positional correction gain
  double restitution_threshold = 0.25;  // approach speed for bounce, m/s
  double static_friction = 0.8;         // friction of static geometry
  int cylinder_facets = 12;             // collision prism resolution

  double sleep_linear = 0.005;   // m/s
  double sleep_angular = 0.05;   // rad/s
  double sleep_time = 0.1;       // s below thresholds before sleeping

  double rest_velocity = 0.02;     // settle() rest speed
  double settle_window = 0.25;     // s of consecutive rest
  double settle_max_time = 5.0;    // settle() budget

  Vec3 gripper_half_extents{0.04, 0.04, 0.07};
  double gripper_speed = 0.5;      // m/s along sweep segments
  double grasp_clearance = 0.005;  // gap between gripper and object
  double approach_distance = 0.25; // straight-line approach length
  double grasp_tolerance_pos = 0.01;     // m
  double grasp_tolerance_ang_deg = 5.0;  // degrees

  void validate() const;  // throws ValidationError
};

/// Deterministic rigid-body world: semi-implicit Euler integration, a
/// velocity-level sequential impulse solver with pyramidal friction, and
/// contact ordering sorted by object-id pair. Identical inputs give
/// bit-identical states.
class World {
 public:
  explicit World(const Scene& scene, const SimConfig& cfg = {});
  ~World();
  World(World&&) noexcept;
  World& operator=(World&&) noexcept;
  World(const World&) = delete;
  World& operator=(const World&) = delete;

  /// Advances one cfg.dt step.
  void step();
  void step_for(double seconds);

  double time() const;
  Scene snapshot() const;

  Pose object_pose(const std::string& id) const;
  void set_velocity(const std::string& id, const Vec3& linear,
                    const Vec3& angular);
  Vec3 linear_velocity(const std::string& id) const;

  /// True when every dynamic body is asleep or slower than rest_velocity
  /// in both linear and angular speed.
  bool all_resting(double rest_velocity) const;

  struct Impl;
  Impl& impl() { return *impl_; }

 private:
  std::unique_ptr<Impl> impl_;
};

/// Advances a settled-or-not scene by exactly one integration step of
/// length dt (0 < dt <= 1/60). Velocities start at zero; multi-step
/// probes should hold a World.
Scene step(const Scene& scene, double dt);

/// Steps until every object stays below rest_velocity for a consecutive
/// settle window, or until max_time elapses. Returns the final scene and
/// whether rest was reached.
std::pair<Scene, bool> settle(const Scene& scene, double max_time,
                              double rest_velocity,
                              const SimConfig& cfg = {});

/// Runs one grasp-and-extract episode: sweeps the kinematic gripper along
/// the approach, attaches the active object if it is still within grasp
/// tolerance, sweeps the extraction, unloads the object, and settles the
/// remainder. Object trajectories are recorded at sample_hz throughout,
/// including the settling phase.
EpisodeResult run_episode(const Scene& scene, const ManipulationPlan& action,
                          double sample_hz, const SimConfig& cfg = {});

}  // namespace seqplan
