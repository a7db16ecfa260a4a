#include "seqplan/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "collision.hpp"

namespace seqplan {

void SimConfig::validate() const {
  if (!(dt > 0.0) || dt > 1.0 / 60.0) {
    throw ValidationError("sim dt must lie in (0, 1/60]");
  }
  if (solver_iterations < 1) {
    throw ValidationError("solver_iterations must be >= 1");
  }
  if (!(sample_hz > 0.0)) {
    throw ValidationError("sample_hz must be positive");
  }
  if (cylinder_facets < 6) {
    throw ValidationError("cylinder_facets must be >= 6");
  }
  if (!(gripper_speed > 0.0) || gripper_speed > 2.0) {
    throw ValidationError("gripper_speed must lie in (0, 2] m/s");
  }
}

namespace {

using detail::ContactManifold;
using detail::ConvexShape;
using detail::WorldShape;

constexpr const char* kGripperId = "#gripper";

struct Body {
  std::string id;
  Shape shape = Shape::box(Vec3(0.05, 0.05, 0.05));
  ConvexShape geom;
  WorldShape world;

  Vec3 pos{0, 0, 0};
  Quat orn{1, 0, 0, 0};
  Vec3 lin_vel{0, 0, 0};
  Vec3 ang_vel{0, 0, 0};

  double inv_mass = 0.0;
  Vec3 inv_inertia_diag{0, 0, 0};  // body frame
  double friction = 0.6;
  double restitution = 0.0;

  bool is_static = false;
  bool kinematic = false;
  std::optional<Pose> kinematic_target;

  bool asleep = false;
  double sleep_timer = 0.0;

  bool dynamic() const { return !is_static && !kinematic; }
  bool moving_kinematic() const {
    return kinematic && lin_vel.squaredNorm() > 1e-18;
  }
  Mat3 inv_inertia_world() const {
    Mat3 r = orn.toRotationMatrix();
    return r * inv_inertia_diag.asDiagonal() * r.transpose();
  }
  void wake() {
    asleep = false;
    sleep_timer = 0.0;
  }
};

struct Constraint {
  int a = 0, b = 0;
  Vec3 normal, t1, t2;
  Vec3 ra, rb;
  double mass_n = 0.0, mass_t1 = 0.0, mass_t2 = 0.0;
  double target_v = 0.0;  // max of position bias and restitution bounce
  double friction = 0.0;
  double jn = 0.0, jt1 = 0.0, jt2 = 0.0;
};

Vec3 any_orthogonal(const Vec3& n) {
  // Deterministic tangent: cross with the axis least aligned with n.
  int axis = 0;
  double best = std::abs(n.x());
  if (std::abs(n.y()) < best) {
    best = std::abs(n.y());
    axis = 1;
  }
  if (std::abs(n.z()) < best) axis = 2;
  Vec3 e = Vec3::Zero();
  e[axis] = 1.0;
  return n.cross(e).normalized();
}

}  // namespace

struct World::Impl {
  SimConfig cfg;
  Scene scene_template;  // statics / workspace / gravity / object metadata
  std::vector<Body> bodies;
  double time = 0.0;
  std::vector<Constraint> constraints;

  Impl(const Scene& scene, const SimConfig& config) : cfg(config) {
    cfg.validate();
    scene.validate();
    scene_template = scene;

    for (const SceneObject& obj : scene.objects) {
      Body b;
      b.id = obj.id;
      b.shape = obj.shape;
      b.geom = ConvexShape::from_shape(obj.shape, cfg.cylinder_facets);
      b.pos = obj.pose.position;
      b.orn = obj.pose.orientation.normalized();
      b.inv_mass = 1.0 / obj.mass;
      Vec3 inertia = obj.shape.inertia_diagonal(obj.mass);
      b.inv_inertia_diag = inertia.cwiseInverse();
      b.friction = obj.friction;
      b.restitution = obj.restitution;
      bodies.push_back(std::move(b));
    }
    int static_index = 0;
    for (const StaticGeometry& sg : scene.statics) {
      Body b;
      b.id = "#static" + std::to_string(static_index++);
      b.shape = sg.shape;
      b.geom = ConvexShape::from_shape(sg.shape, cfg.cylinder_facets);
      b.pos = sg.pose.position;
      b.orn = sg.pose.orientation.normalized();
      b.is_static = true;
      b.friction = cfg.static_friction;
      b.restitution = 0.0;
      bodies.push_back(std::move(b));
    }
  }

  int find_body(const std::string& id) const {
    for (int i = 0; i < static_cast<int>(bodies.size()); ++i) {
      if (bodies[i].id == id) return i;
    }
    throw ValidationError("unknown body id: " + id);
  }

  int add_gripper(const Pose& pose) {
    Body b;
    b.id = kGripperId;
    b.shape = Shape::box(cfg.gripper_half_extents);
    b.geom = ConvexShape::from_shape(b.shape, cfg.cylinder_facets);
    b.pos = pose.position;
    b.orn = pose.orientation;
    b.kinematic = true;
    b.friction = cfg.static_friction;
    bodies.push_back(std::move(b));
    return static_cast<int>(bodies.size()) - 1;
  }

  void remove_body(const std::string& id) {
    int idx = find_body(id);
    // Anything the removed body could have been supporting must resettle.
    for (Body& other : bodies) {
      if (&other != &bodies[idx] && other.dynamic()) {
        bool near = true;
        for (int k = 0; k < 3; ++k) {
          if (bodies[idx].world.aabb_max[k] + cfg.contact_margin <
                  other.world.aabb_min[k] ||
              other.world.aabb_max[k] + cfg.contact_margin <
                  bodies[idx].world.aabb_min[k]) {
            near = false;
          }
        }
        if (near) other.wake();
      }
    }
    bodies.erase(bodies.begin() + idx);
  }

  void set_kinematic_target(int idx, const Pose& target) {
    Body& b = bodies[idx];
    b.kinematic_target = target;
    b.lin_vel = (target.position - b.pos) / cfg.dt;
    b.ang_vel = Vec3::Zero();  // sweeps never rotate the gripper
  }

  void refresh_world_shapes() {
    for (Body& b : bodies) {
      b.world.update(b.geom, Pose{b.pos, b.orn});
    }
  }

  bool narrowphase_wanted(const Body& a, const Body& b) const {
    if (a.is_static && b.is_static) return false;
    if (a.kinematic && b.kinematic) return false;
    if ((a.is_static && b.kinematic) || (a.kinematic && b.is_static)) {
      return false;
    }
    bool a_inert = a.is_static || (a.dynamic() && a.asleep);
    bool b_inert = b.is_static || (b.dynamic() && b.asleep);
    if (a_inert && b_inert) return false;
    return true;
  }

  struct PairContact {
    int a, b;
    ContactManifold manifold;
  };

  void step() {
    const double dt = cfg.dt;
    refresh_world_shapes();

    // Narrowphase in body-index order; indices follow the id-sorted scene,
    // so the contact stream is identical across runs.
    std::vector<PairContact> contacts;
    for (int i = 0; i < static_cast<int>(bodies.size()); ++i) {
      for (int j = i + 1; j < static_cast<int>(bodies.size()); ++j) {
        if (!narrowphase_wanted(bodies[i], bodies[j])) continue;
        if (!detail::aabb_overlap(bodies[i].world, bodies[j].world,
                                  cfg.contact_margin)) {
          continue;
        }
        ContactManifold m;
        if (detail::collide(bodies[i].world, bodies[j].world,
                            cfg.contact_margin, m) &&
            !m.points.empty()) {
          contacts.push_back({i, j, std::move(m)});
        }
      }
    }

    // Wake pass: sleeping bodies touched by a moving kinematic or by a
    // faster-than-sleep-threshold awake body get back into the solve.
    for (const PairContact& pc : contacts) {
      Body& a = bodies[pc.a];
      Body& b = bodies[pc.b];
      auto disturbing = [&](const Body& body) {
        if (body.moving_kinematic()) return true;
        return body.dynamic() && !body.asleep &&
               (body.lin_vel.norm() > cfg.sleep_linear ||
                body.ang_vel.norm() > cfg.sleep_angular);
      };
      if (a.dynamic() && a.asleep && disturbing(b)) a.wake();
      if (b.dynamic() && b.asleep && disturbing(a)) b.wake();
    }

    // Gravity (semi-implicit: velocities first, positions after the solve).
    for (Body& b : bodies) {
      if (b.dynamic() && !b.asleep) {
        b.lin_vel += scene_template.gravity * dt;
      }
    }

    build_constraints(contacts);
    for (int it = 0; it < cfg.solver_iterations; ++it) {
      solve_once();
    }

    for (Body& b : bodies) {
      if (b.kinematic) {
        if (b.kinematic_target) {
          b.pos = b.kinematic_target->position;
          b.orn = b.kinematic_target->orientation;
          b.kinematic_target.reset();
        }
        continue;
      }
      if (b.is_static || b.asleep) continue;
      b.pos += b.lin_vel * dt;
      Quat w(0.0, b.ang_vel.x(), b.ang_vel.y(), b.ang_vel.z());
      Quat dq = w * b.orn;
      b.orn.coeffs() += 0.5 * dt * dq.coeffs();
      b.orn.normalize();
    }

    update_sleep(contacts, dt);
    time += dt;
  }

  void build_constraints(const std::vector<PairContact>& contacts) {
    constraints.clear();
    for (const PairContact& pc : contacts) {
      Body& a = bodies[pc.a];
      Body& b = bodies[pc.b];
      // Sleeping bodies that stayed asleep resist like static geometry.
      double inv_ma = (a.dynamic() && !a.asleep) ? a.inv_mass : 0.0;
      double inv_mb = (b.dynamic() && !b.asleep) ? b.inv_mass : 0.0;
      Mat3 inv_ia = (a.dynamic() && !a.asleep) ? a.inv_inertia_world()
                                               : Mat3::Zero();
      Mat3 inv_ib = (b.dynamic() && !b.asleep) ? b.inv_inertia_world()
                                               : Mat3::Zero();
      if (inv_ma == 0.0 && inv_mb == 0.0) continue;

      double friction = std::sqrt(a.friction * b.friction);
      double restitution = std::min(a.restitution, b.restitution);

      for (const detail::ContactPoint& cp : pc.manifold.points) {
        Constraint c;
        c.a = pc.a;
        c.b = pc.b;
        c.normal = pc.manifold.normal;
        c.t1 = any_orthogonal(c.normal);
        c.t2 = c.normal.cross(c.t1);
        c.ra = cp.position - a.pos;
        c.rb = cp.position - b.pos;
        c.friction = friction;

        auto effective_mass = [&](const Vec3& d) {
          Vec3 ta = c.ra.cross(d);
          Vec3 tb = c.rb.cross(d);
          double k = inv_ma + inv_mb + d.dot((inv_ia * ta).cross(c.ra)) +
                     d.dot((inv_ib * tb).cross(c.rb));
          return k > 1e-12 ? 1.0 / k : 0.0;
        };
        c.mass_n = effective_mass(c.normal);
        c.mass_t1 = effective_mass(c.t1);
        c.mass_t2 = effective_mass(c.t2);

        double bias = cfg.baumgarte / cfg.dt *
                      std::max(0.0, cp.depth - cfg.slop);
        Vec3 vrel = (b.lin_vel + b.ang_vel.cross(c.rb)) -
                    (a.lin_vel + a.ang_vel.cross(c.ra));
        double vn = c.normal.dot(vrel);
        double bounce =
            vn < -cfg.restitution_threshold ? -restitution * vn : 0.0;
        c.target_v = std::max(bias, bounce);
        constraints.push_back(c);
      }
    }
  }

  void apply_impulse(Body& body, const Vec3& impulse, const Vec3& r,
                     double inv_m, const Mat3& inv_i) {
    body.lin_vel += impulse * inv_m;
    body.ang_vel += inv_i * r.cross(impulse);
  }

  void solve_once() {
    for (Constraint& c : constraints) {
      Body& a = bodies[c.a];
      Body& b = bodies[c.b];
      double inv_ma = (a.dynamic() && !a.asleep) ? a.inv_mass : 0.0;
      double inv_mb = (b.dynamic() && !b.asleep) ? b.inv_mass : 0.0;
      Mat3 inv_ia = (a.dynamic() && !a.asleep) ? a.inv_inertia_world()
                                               : Mat3::Zero();
      Mat3 inv_ib = (b.dynamic() && !b.asleep) ? b.inv_inertia_world()
                                               : Mat3::Zero();

      Vec3 vrel = (b.lin_vel + b.ang_vel.cross(c.rb)) -
                  (a.lin_vel + a.ang_vel.cross(c.ra));
      double vn = c.normal.dot(vrel);
      double dj = c.mass_n * (c.target_v - vn);
      double jn_new = std::max(c.jn + dj, 0.0);
      dj = jn_new - c.jn;
      c.jn = jn_new;
      Vec3 imp = dj * c.normal;
      apply_impulse(a, -imp, c.ra, inv_ma, inv_ia);
      apply_impulse(b, imp, c.rb, inv_mb, inv_ib);

      double max_f = c.friction * c.jn;
      for (int t = 0; t < 2; ++t) {
        const Vec3& tan = t == 0 ? c.t1 : c.t2;
        double& jt = t == 0 ? c.jt1 : c.jt2;
        double mass = t == 0 ? c.mass_t1 : c.mass_t2;
        vrel = (b.lin_vel + b.ang_vel.cross(c.rb)) -
               (a.lin_vel + a.ang_vel.cross(c.ra));
        double vt = tan.dot(vrel);
        double djt = -mass * vt;
        double jt_new = std::clamp(jt + djt, -max_f, max_f);
        djt = jt_new - jt;
        jt = jt_new;
        Vec3 fimp = djt * tan;
        apply_impulse(a, -fimp, c.ra, inv_ma, inv_ia);
        apply_impulse(b, fimp, c.rb, inv_mb, inv_ib);
      }
    }
  }

  void update_sleep(const std::vector<PairContact>& contacts, double dt) {
    const int n = static_cast<int>(bodies.size());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
      }
      return x;
    };
    std::vector<char> agitated(n, 0);
    for (const PairContact& pc : contacts) {
      const Body& a = bodies[pc.a];
      const Body& b = bodies[pc.b];
      if (a.dynamic() && b.dynamic()) {
        parent[find(pc.a)] = find(pc.b);
      }
      if (a.dynamic() && b.moving_kinematic()) agitated[pc.a] = 1;
      if (b.dynamic() && a.moving_kinematic()) agitated[pc.b] = 1;
    }

    // Island verdicts: every awake member must be below the sleep
    // thresholds and nothing in the island may touch a moving kinematic.
    std::vector<char> island_calm(n, 1);
    for (int i = 0; i < n; ++i) {
      const Body& b = bodies[i];
      if (!b.dynamic()) continue;
      bool calm = !agitated[i];
      if (!b.asleep && calm) {
        calm = b.lin_vel.norm() < cfg.sleep_linear &&
               b.ang_vel.norm() < cfg.sleep_angular;
      }
      if (!calm) island_calm[find(i)] = 0;
    }
    for (int i = 0; i < n; ++i) {
      Body& b = bodies[i];
      if (!b.dynamic() || b.asleep) continue;
      if (island_calm[find(i)]) {
        b.sleep_timer += dt;
        if (b.sleep_timer >= cfg.sleep_time) {
          b.asleep = true;
          b.lin_vel = Vec3::Zero();
          b.ang_vel = Vec3::Zero();
        }
      } else {
        b.sleep_timer = 0.0;
      }
    }
  }

  bool all_resting(double rest_velocity) const {
    for (const Body& b : bodies) {
      if (!b.dynamic()) continue;
      if (b.asleep) continue;
      if (b.lin_vel.norm() >= rest_velocity ||
          b.ang_vel.norm() >= rest_velocity) {
        return false;
      }
    }
    return true;
  }

  Scene snapshot() const {
    Scene out = scene_template;
    out.objects.clear();
    for (const Body& b : bodies) {
      if (b.is_static || b.id == kGripperId) continue;
      const SceneObject* meta = scene_template.find(b.id);
      SceneObject obj = *meta;
      obj.pose = Pose{b.pos, b.orn};
      out.objects.push_back(std::move(obj));
    }
    return out;
  }
};

World::World(const Scene& scene, const SimConfig& cfg)
    : impl_(std::make_unique<Impl>(scene, cfg)) {}
World::~World() = default;
World::World(World&&) noexcept = default;
World& World::operator=(World&&) noexcept = default;

void World::step() { impl_->step(); }

void World::step_for(double seconds) {
  int steps = static_cast<int>(std::round(seconds / impl_->cfg.dt));
  for (int i = 0; i < steps; ++i) impl_->step();
}

double World::time() const { return impl_->time; }
Scene World::snapshot() const { return impl_->snapshot(); }

Pose World::object_pose(const std::string& id) const {
  const Body& b = impl_->bodies[impl_->find_body(id)];
  return Pose{b.pos, b.orn};
}

void World::set_velocity(const std::string& id, const Vec3& linear,
                         const Vec3& angular) {
  Body& b = impl_->bodies[impl_->find_body(id)];
  b.lin_vel = linear;
  b.ang_vel = angular;
  b.wake();
}

Vec3 World::linear_velocity(const std::string& id) const {
  return impl_->bodies[impl_->find_body(id)].lin_vel;
}

bool World::all_resting(double rest_velocity) const {
  return impl_->all_resting(rest_velocity);
}

Scene step(const Scene& scene, double dt) {
  SimConfig cfg;
  cfg.dt = dt;
  World world(scene, cfg);
  world.step();
  return world.snapshot();
}

std::pair<Scene, bool> settle(const Scene& scene, double max_time,
                              double rest_velocity, const SimConfig& cfg) {
  World world(scene, cfg);
  const int window =
      std::max(1, static_cast<int>(std::round(cfg.settle_window / cfg.dt)));
  int consecutive = 0;
  bool settled = false;
  while (world.time() < max_time) {
    world.step();
    if (world.all_resting(rest_velocity)) {
      if (++consecutive >= window) {
        settled = true;
        break;
      }
    } else {
      consecutive = 0;
    }
  }
  return {world.snapshot(), settled};
}

namespace {

/// Fixed-rate pose recorder; also tracks workspace exits per object.
struct Recorder {
  World::Impl& w;
  double period;
  int stride;
  int step_count = 0;
  std::map<std::string, Trajectory> trajectories;
  std::set<std::string> exited;

  Recorder(World::Impl& world, double sample_hz)
      : w(world), period(1.0 / sample_hz),
        stride(std::max(
            1, static_cast<int>(std::round(1.0 / (sample_hz * world.cfg.dt))))) {
    record_now(0.0);
  }

  void record_now(double t) {
    for (const Body& b : w.bodies) {
      if (b.is_static || b.id == kGripperId) continue;
      Trajectory& traj = trajectories[b.id];
      if (traj.samples.empty()) {
        traj.object_id = b.id;
        traj.sample_period = period;
      }
      traj.samples.push_back({t, Pose{b.pos, b.orn}});
      if (!w.scene_template.workspace.contains(b.pos)) {
        exited.insert(b.id);
      }
    }
  }

  void after_step() {
    ++step_count;
    if (step_count % stride == 0) {
      record_now(step_count * w.cfg.dt);
    }
  }

  void final_flush() {
    double t = step_count * w.cfg.dt;
    if (step_count % stride != 0) {
      record_now(t);
    }
  }
};

}  // namespace

EpisodeResult run_episode(const Scene& scene, const ManipulationPlan& action,
                          double sample_hz, const SimConfig& cfg) {
  if (!scene.has(action.object_id)) {
    throw InvalidAction("action references unknown object " +
                        action.object_id);
  }
  if (action.approach.empty() || action.extraction.empty()) {
    throw InvalidAction("action needs non-empty approach and extraction");
  }
  if (!(sample_hz > 0.0)) {
    throw InvalidAction("sample_hz must be positive");
  }

  World world(scene, cfg);
  World::Impl& w = world.impl();
  int gripper = w.add_gripper(action.approach.front());
  Recorder rec(w, sample_hz);

  const Pose initial_active = world.object_pose(action.object_id);
  int attached = -1;
  Pose attach_rel;

  auto sweep = [&](const Pose& from, const Pose& to) {
    double dist = (to.position - from.position).norm();
    int steps = std::max(
        1, static_cast<int>(std::ceil(dist / (cfg.gripper_speed * cfg.dt))));
    for (int s = 1; s <= steps; ++s) {
      double frac = static_cast<double>(s) / steps;
      Pose target{from.position + frac * (to.position - from.position),
                  to.orientation};
      w.set_kinematic_target(gripper, target);
      if (attached >= 0) {
        Pose obj_target = target * attach_rel;
        w.set_kinematic_target(attached, obj_target);
      }
      w.step();
      rec.after_step();
    }
  };

  for (std::size_t i = 0; i + 1 < action.approach.size(); ++i) {
    sweep(action.approach[i], action.approach[i + 1]);
  }

  EpisodeFlags flags;
  const Pose at_grasp = world.object_pose(action.object_id);
  double dpos = (at_grasp.position - initial_active.position).norm();
  double dang = quat_angle(at_grasp.orientation, initial_active.orientation);
  flags.active_unreachable =
      dpos > cfg.grasp_tolerance_pos ||
      dang > cfg.grasp_tolerance_ang_deg * std::numbers::pi / 180.0;

  if (!flags.active_unreachable) {
    attached = w.find_body(action.object_id);
    Body& obj = w.bodies[attached];
    obj.kinematic = true;
    obj.lin_vel = Vec3::Zero();
    obj.ang_vel = Vec3::Zero();
    const Body& g = w.bodies[gripper];
    Pose gripper_pose{g.pos, g.orn};
    attach_rel = gripper_pose.inverse() * Pose{obj.pos, obj.orn};
  }

  for (std::size_t i = 0; i + 1 < action.extraction.size(); ++i) {
    sweep(action.extraction[i], action.extraction[i + 1]);
  }

  // Release: the extracted object leaves with the robot. The gripper
  // retires too, then the rest of the scene settles while recording
  // continues, so knock-on motion stays in the trajectories.
  w.refresh_world_shapes();
  if (attached >= 0) {
    w.remove_body(action.object_id);
  }
  w.remove_body(kGripperId);

  const int window =
      std::max(1, static_cast<int>(std::round(cfg.settle_window / cfg.dt)));
  int consecutive = 0;
  double settle_start = w.time;
  while (w.time - settle_start < cfg.settle_max_time) {
    w.step();
    rec.after_step();
    if (w.all_resting(cfg.rest_velocity)) {
      if (++consecutive >= window) {
        flags.settled = true;
        break;
      }
    } else {
      consecutive = 0;
    }
  }
  rec.final_flush();

  EpisodeResult result;
  result.final_scene = w.snapshot();
  result.trajectories = std::move(rec.trajectories);
  rec.exited.erase(action.object_id);  // intended unload is not an exit
  flags.out_of_workspace = std::move(rec.exited);
  result.flags = flags;
  return result;
}

}  // namespace seqplan
