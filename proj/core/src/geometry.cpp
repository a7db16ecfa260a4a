#include "seqplan/geometry.hpp"

#include <cmath>
#include <numbers>

namespace seqplan {

bool Pose::has_unit_orientation(double tol) const {
  return std::abs(orientation.norm() - 1.0) <= tol;
}

double quat_angle(const Quat& a, const Quat& b) {
  double d = std::abs(a.dot(b));
  d = std::min(d, 1.0);
  return 2.0 * std::acos(d);
}

Shape Shape::box(const Vec3& half_extents) {
  if (!(half_extents.x() > 0.0 && half_extents.y() > 0.0 &&
        half_extents.z() > 0.0)) {
    throw ValidationError("box half extents must be strictly positive");
  }
  return Shape(Box{half_extents});
}

Shape Shape::cylinder(double radius, double half_height) {
  if (!(radius > 0.0 && half_height > 0.0)) {
    throw ValidationError(
        "cylinder radius and half height must be strictly positive");
  }
  return Shape(Cylinder{radius, half_height});
}

double Shape::volume() const {
  if (is_box()) {
    const Vec3& h = as_box().half_extents;
    return 8.0 * h.x() * h.y() * h.z();
  }
  const Cylinder& c = as_cylinder();
  return std::numbers::pi * c.radius * c.radius * 2.0 * c.half_height;
}

Vec3 Shape::inertia_diagonal(double mass) const {
  if (is_box()) {
    const Vec3& h = as_box().half_extents;
    double x2 = h.x() * h.x(), y2 = h.y() * h.y(), z2 = h.z() * h.z();
    return mass / 3.0 * Vec3(y2 + z2, x2 + z2, x2 + y2);
  }
  const Cylinder& c = as_cylinder();
  double r2 = c.radius * c.radius;
  double h2 = 4.0 * c.half_height * c.half_height;
  double lateral = mass * (3.0 * r2 + h2) / 12.0;
  return Vec3(lateral, lateral, 0.5 * mass * r2);
}

std::vector<Vec3> Shape::local_samples() const {
  std::vector<Vec3> pts;
  if (is_box()) {
    const Vec3& h = as_box().half_extents;
    pts.reserve(8);
    for (int i = 0; i < 8; ++i) {
      pts.emplace_back((i & 1) ? h.x() : -h.x(), (i & 2) ? h.y() : -h.y(),
                       (i & 4) ? h.z() : -h.z());
    }
    return pts;
  }
  const Cylinder& c = as_cylinder();
  pts.reserve(2 * kCylinderRingSamples);
  for (int ring = 0; ring < 2; ++ring) {
    double z = ring == 0 ? -c.half_height : c.half_height;
    for (int k = 0; k < kCylinderRingSamples; ++k) {
      double theta = 2.0 * std::numbers::pi * k / kCylinderRingSamples;
      pts.emplace_back(c.radius * std::cos(theta), c.radius * std::sin(theta),
                       z);
    }
  }
  return pts;
}

double Shape::support_extent(const Quat& orientation, const Vec3& dir) const {
  // Work in the local frame: extent along d = R^T dir.
  Vec3 d = orientation.conjugate() * dir;
  if (is_box()) {
    const Vec3& h = as_box().half_extents;
    return std::abs(d.x()) * h.x() + std::abs(d.y()) * h.y() +
           std::abs(d.z()) * h.z();
  }
  const Cylinder& c = as_cylinder();
  double axial = std::abs(d.z()) * c.half_height;
  double radial = c.radius * std::hypot(d.x(), d.y());
  return axial + radial;
}

PointCloud sample_shape(const Shape& shape, const Pose& pose) {
  PointCloud cloud;
  const std::vector<Vec3> local = shape.local_samples();
  cloud.points.reserve(local.size());
  for (const Vec3& p : local) {
    cloud.points.push_back(pose.apply(p));
  }
  return cloud;
}

PointCloud transform_cloud(const PointCloud& cloud, const Pose& from,
                           const Pose& to) {
  const Pose t = to * from.inverse();
  PointCloud out;
  out.points.reserve(cloud.points.size());
  for (const Vec3& p : cloud.points) {
    out.points.push_back(t.apply(p));
  }
  return out;
}

double hull_signed_distance(const Polyhedron& poly, const Vec3& p) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& f : poly.faces) {
    const Vec3& a = poly.vertices[f[0]];
    const Vec3& b = poly.vertices[f[1]];
    const Vec3& c = poly.vertices[f[2]];
    Vec3 n = (b - a).cross(c - a);
    double len = n.norm();
    if (len <= 0.0) continue;
    double d = n.dot(p - a) / len;
    if (d > worst) worst = d;
  }
  return worst;
}

double hull_volume(const Polyhedron& poly) {
  double six_v = 0.0;
  for (const auto& f : poly.faces) {
    const Vec3& a = poly.vertices[f[0]];
    const Vec3& b = poly.vertices[f[1]];
    const Vec3& c = poly.vertices[f[2]];
    six_v += a.dot(b.cross(c));
  }
  return six_v / 6.0;
}

}  // namespace seqplan
