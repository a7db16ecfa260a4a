#include "collision.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace seqplan::detail {
namespace {

constexpr double kAxisTie = 1e-6;       // face-over-edge preference band
constexpr double kParallelEps = 1e-8;   // skip near-parallel edge crosses

struct AxisResult {
  Vec3 axis{0.0, 0.0, 1.0};  // unit, oriented from A to B
  double separation = -std::numeric_limits<double>::infinity();
  bool from_face = false;
  bool separated = false;
};

void project(const std::vector<Vec3>& verts, const Vec3& axis, double& lo,
             double& hi) {
  lo = std::numeric_limits<double>::infinity();
  hi = -lo;
  for (const Vec3& v : verts) {
    double d = axis.dot(v);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
}

/// Evaluates one candidate axis; keeps the axis of maximum separation
/// (least penetration). Returns false when a separating axis (> margin)
/// was found and the scan can stop.
bool test_axis(const WorldShape& a, const WorldShape& b, Vec3 axis,
               bool from_face, double margin, AxisResult& best) {
  if (axis.dot(b.center - a.center) < 0.0) axis = -axis;
  double alo, ahi, blo, bhi;
  project(a.verts, axis, alo, ahi);
  project(b.verts, axis, blo, bhi);
  double separation = blo - ahi;  // negative = overlap along this axis
  if (separation > margin) {
    best.separated = true;
    return false;
  }
  if (separation > best.separation + kAxisTie ||
      (from_face && !best.from_face &&
       separation > best.separation - kAxisTie)) {
    best.axis = axis;
    best.separation = separation;
    best.from_face = from_face;
  }
  return true;
}

int most_aligned_face(const WorldShape& s, const Vec3& dir) {
  int bestf = 0;
  double bestd = -std::numeric_limits<double>::infinity();
  for (int f = 0; f < static_cast<int>(s.face_normals.size()); ++f) {
    double d = s.face_normals[f].dot(dir);
    if (d > bestd) {
      bestd = d;
      bestf = f;
    }
  }
  return bestf;
}

std::vector<Vec3> face_polygon(const WorldShape& s, int face) {
  std::vector<Vec3> poly;
  poly.reserve(s.local->faces[face].verts.size());
  for (int vi : s.local->faces[face].verts) {
    poly.push_back(s.verts[vi]);
  }
  return poly;
}

/// Sutherland-Hodgman clip of `poly` against the half-space
/// n·x >= n·p0 (keep side).
void clip_halfspace(std::vector<Vec3>& poly, const Vec3& n, const Vec3& p0) {
  if (poly.empty()) return;
  std::vector<Vec3> out;
  out.reserve(poly.size() + 2);
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec3& cur = poly[i];
    const Vec3& nxt = poly[(i + 1) % poly.size()];
    double dc = n.dot(cur - p0);
    double dn = n.dot(nxt - p0);
    if (dc >= 0.0) out.push_back(cur);
    if ((dc >= 0.0) != (dn >= 0.0)) {
      double t = dc / (dc - dn);
      out.push_back(cur + t * (nxt - cur));
    }
  }
  poly = std::move(out);
}

/// Endpoints of the support edge along dir: the two vertices with the
/// highest projection, provided they are joined by an actual edge length.
bool support_edge(const WorldShape& s, const Vec3& dir, Vec3& e0, Vec3& e1) {
  double best = -std::numeric_limits<double>::infinity();
  for (const Vec3& v : s.verts) best = std::max(best, dir.dot(v));
  const double tol = 1e-9 * (1.0 + std::abs(best));
  int found = 0;
  for (const Vec3& v : s.verts) {
    if (dir.dot(v) >= best - tol) {
      if (found == 0) e0 = v;
      if (found == 1) e1 = v;
      ++found;
    }
  }
  return found == 2;
}

void closest_segment_points(const Vec3& p1, const Vec3& q1, const Vec3& p2,
                            const Vec3& q2, Vec3& c1, Vec3& c2) {
  Vec3 d1 = q1 - p1, d2 = q2 - p2, r = p1 - p2;
  double a = d1.dot(d1), e = d2.dot(d2), f = d2.dot(r);
  double s = 0.0, t = 0.0;
  double c = d1.dot(r), b = d1.dot(d2);
  double denom = a * e - b * b;
  if (denom > 1e-16) s = std::clamp((b * f - c * e) / denom, 0.0, 1.0);
  t = e > 1e-16 ? (b * s + f) / e : 0.0;
  if (t < 0.0) {
    t = 0.0;
    s = std::clamp(-c / std::max(a, 1e-16), 0.0, 1.0);
  } else if (t > 1.0) {
    t = 1.0;
    s = std::clamp((b - c) / std::max(a, 1e-16), 0.0, 1.0);
  }
  c1 = p1 + s * d1;
  c2 = p2 + t * d2;
}

}  // namespace

ConvexShape ConvexShape::from_shape(const Shape& shape, int cylinder_facets) {
  ConvexShape out;
  if (shape.is_box()) {
    const Vec3& h = shape.as_box().half_extents;
    for (int i = 0; i < 8; ++i) {
      out.verts.emplace_back((i & 1) ? h.x() : -h.x(),
                             (i & 2) ? h.y() : -h.y(),
                             (i & 4) ? h.z() : -h.z());
    }
    // Index layout: bit0 = +x, bit1 = +y, bit2 = +z.
    out.faces = {
        {Vec3(1, 0, 0), {1, 3, 7, 5}},  {Vec3(-1, 0, 0), {0, 4, 6, 2}},
        {Vec3(0, 1, 0), {2, 6, 7, 3}},  {Vec3(0, -1, 0), {0, 1, 5, 4}},
        {Vec3(0, 0, 1), {4, 5, 7, 6}},  {Vec3(0, 0, -1), {0, 2, 3, 1}},
    };
    out.edge_dirs = {Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};
    return out;
  }

  const Cylinder& c = shape.as_cylinder();
  const int k = cylinder_facets;
  // Circumscribed prism so the flat facets carry the full radius; rest
  // height on a flat face then matches the analytic radius.
  const double r = c.radius / std::cos(std::numbers::pi / k);
  for (int ring = 0; ring < 2; ++ring) {
    double z = ring == 0 ? -c.half_height : c.half_height;
    for (int i = 0; i < k; ++i) {
      double theta = 2.0 * std::numbers::pi * (i + 0.5) / k;
      out.verts.emplace_back(r * std::cos(theta), r * std::sin(theta), z);
    }
  }
  ConvexShape::Face bottom, top;
  bottom.normal = Vec3(0, 0, -1);
  top.normal = Vec3(0, 0, 1);
  for (int i = 0; i < k; ++i) {
    bottom.verts.push_back(k - 1 - i);  // CW from above = CCW from below
    top.verts.push_back(k + i);
  }
  out.faces.push_back(bottom);
  out.faces.push_back(top);
  out.edge_dirs.emplace_back(0, 0, 1);
  for (int i = 0; i < k; ++i) {
    int j = (i + 1) % k;
    ConvexShape::Face side;
    double theta = 2.0 * std::numbers::pi * (i + 1.0) / k;
    side.normal = Vec3(std::cos(theta), std::sin(theta), 0.0);
    side.verts = {i, j, k + j, k + i};
    out.faces.push_back(side);
    out.edge_dirs.push_back((out.verts[j] - out.verts[i]).normalized());
  }
  return out;
}

void WorldShape::update(const ConvexShape& shape, const Pose& pose) {
  local = &shape;
  Mat3 r = pose.orientation.toRotationMatrix();
  verts.resize(shape.verts.size());
  aabb_min = Vec3::Constant(std::numeric_limits<double>::infinity());
  aabb_max = -aabb_min;
  for (std::size_t i = 0; i < shape.verts.size(); ++i) {
    verts[i] = r * shape.verts[i] + pose.position;
    aabb_min = aabb_min.cwiseMin(verts[i]);
    aabb_max = aabb_max.cwiseMax(verts[i]);
  }
  face_normals.resize(shape.faces.size());
  for (std::size_t i = 0; i < shape.faces.size(); ++i) {
    face_normals[i] = r * shape.faces[i].normal;
  }
  edge_dirs.resize(shape.edge_dirs.size());
  for (std::size_t i = 0; i < shape.edge_dirs.size(); ++i) {
    edge_dirs[i] = r * shape.edge_dirs[i];
  }
  center = pose.position;
}

bool aabb_overlap(const WorldShape& a, const WorldShape& b, double margin) {
  for (int i = 0; i < 3; ++i) {
    if (a.aabb_max[i] + margin < b.aabb_min[i]) return false;
    if (b.aabb_max[i] + margin < a.aabb_min[i]) return false;
  }
  return true;
}

bool collide(const WorldShape& a, const WorldShape& b, double margin,
             ContactManifold& out) {
  AxisResult best;
  for (const Vec3& n : a.face_normals) {
    if (!test_axis(a, b, n, true, margin, best)) return false;
  }
  for (const Vec3& n : b.face_normals) {
    if (!test_axis(a, b, n, true, margin, best)) return false;
  }
  for (const Vec3& ea : a.edge_dirs) {
    for (const Vec3& eb : b.edge_dirs) {
      Vec3 axis = ea.cross(eb);
      double len = axis.norm();
      if (len < kParallelEps) continue;
      if (!test_axis(a, b, axis / len, false, margin, best)) return false;
    }
  }

  const Vec3 n = best.axis;  // from A to B
  out.normal = n;
  out.points.clear();

  if (!best.from_face) {
    // Crossed-edge contact: closest points of the two support edges.
    Vec3 a0, a1, b0, b1;
    if (support_edge(a, n, a0, a1) && support_edge(b, -n, b0, b1)) {
      Vec3 ca, cb;
      closest_segment_points(a0, a1, b0, b1, ca, cb);
      out.points.push_back({0.5 * (ca + cb), -best.separation});
      return true;
    }
  }

  // Reference face on the body whose face aligns best with the contact
  // normal; incident face on the other body. The incident polygon is
  // clipped against the reference face's side planes.
  int fa = most_aligned_face(a, n);
  int fb = most_aligned_face(b, -n);
  bool ref_on_a = a.face_normals[fa].dot(n) >= b.face_normals[fb].dot(-n);
  const WorldShape& ref = ref_on_a ? a : b;
  const WorldShape& inc = ref_on_a ? b : a;
  int rf = ref_on_a ? fa : fb;
  Vec3 rn = ref.face_normals[rf];

  std::vector<Vec3> refpoly = face_polygon(ref, rf);
  std::vector<Vec3> poly =
      face_polygon(inc, most_aligned_face(inc, -rn));
  for (std::size_t i = 0; i < refpoly.size() && !poly.empty(); ++i) {
    const Vec3& e0 = refpoly[i];
    const Vec3& e1 = refpoly[(i + 1) % refpoly.size()];
    clip_halfspace(poly, rn.cross(e1 - e0), e0);
  }

  const Vec3& rp = refpoly.front();
  for (const Vec3& p : poly) {
    double depth = rn.dot(rp - p);  // penetration below the reference plane
    if (depth >= -margin) {
      out.points.push_back({p, depth});
    }
  }

  if (out.points.empty()) {
    // Deep or grazing corner case: fall back to the deepest incident
    // vertex against the reference plane.
    double depth = -std::numeric_limits<double>::infinity();
    Vec3 deepest = inc.verts.front();
    for (const Vec3& v : inc.verts) {
      double d = rn.dot(rp - v);
      if (d > depth) {
        depth = d;
        deepest = v;
      }
    }
    if (depth < -margin) return false;
    out.points.push_back({deepest, depth});
  }
  return true;
}

bool overlaps(const WorldShape& a, const WorldShape& b) {
  AxisResult best;
  for (const Vec3& n : a.face_normals) {
    if (!test_axis(a, b, n, true, 0.0, best)) return false;
  }
  for (const Vec3& n : b.face_normals) {
    if (!test_axis(a, b, n, true, 0.0, best)) return false;
  }
  for (const Vec3& ea : a.edge_dirs) {
    for (const Vec3& eb : b.edge_dirs) {
      Vec3 axis = ea.cross(eb);
      double len = axis.norm();
      if (len < kParallelEps) continue;
      if (!test_axis(a, b, axis / len, false, 0.0, best)) return false;
    }
  }
  return true;
}

}  // namespace seqplan::detail
