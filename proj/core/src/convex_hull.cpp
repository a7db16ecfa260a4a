#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "seqplan/geometry.hpp"

namespace seqplan {
namespace {

struct HullFace {
  std::array<int, 3> v;         // cloud indices, CCW from outside
  std::array<int, 3> neighbor;  // face across edge (v[i], v[(i+1)%3])
  Vec3 normal;                  // unit outward
  double offset = 0.0;          // plane: normal · x = offset
  bool alive = true;
};

struct HullBuilder {
  const std::vector<Vec3>& pts;
  double eps;
  std::vector<HullFace> faces;

  explicit HullBuilder(const std::vector<Vec3>& points, double epsilon)
      : pts(points), eps(epsilon) {}

  double dist(int face, int p) const {
    return faces[face].normal.dot(pts[p]) - faces[face].offset;
  }
  bool visible(int face, int p) const { return dist(face, p) > eps; }

  int add_face(int a, int b, int c) {
    HullFace f;
    f.v = {a, b, c};
    Vec3 n = (pts[b] - pts[a]).cross(pts[c] - pts[a]);
    double len = n.norm();
    // Slivers can appear when a horizon edge is nearly collinear with the
    // inserted point; keep the unnormalized direction in that case so the
    // face still orders points consistently.
    f.normal = len > 0.0 ? Vec3(n / len) : Vec3(0.0, 0.0, 0.0);
    f.offset = f.normal.dot(pts[a]);
    f.neighbor = {-1, -1, -1};
    faces.push_back(f);
    return static_cast<int>(faces.size()) - 1;
  }

  // Neighbor slot of `face` whose edge starts at vertex `a` and ends at `b`.
  void link(int fa, int ea, int fb, int eb) {
    faces[fa].neighbor[ea] = fb;
    faces[fb].neighbor[eb] = fa;
  }

  void insert_point(int p) {
    int seed = -1;
    for (int fi = 0; fi < static_cast<int>(faces.size()); ++fi) {
      if (faces[fi].alive && visible(fi, p)) {
        seed = fi;
        break;
      }
    }
    if (seed < 0) return;  // interior point

    // Flood-fill the visible region; the horizon is its rim, stored as
    // directed edges (a, b) together with the invisible face beyond them.
    std::vector<int> visible_set{seed};
    std::vector<char> in_visible(faces.size(), 0);
    in_visible[seed] = 1;
    struct HorizonEdge {
      int a, b;
      int outside_face;
      int outside_slot;
    };
    std::vector<HorizonEdge> horizon;
    for (std::size_t k = 0; k < visible_set.size(); ++k) {
      int fi = visible_set[k];
      for (int e = 0; e < 3; ++e) {
        int nb = faces[fi].neighbor[e];
        if (nb < 0 || !faces[nb].alive || in_visible[nb]) continue;
        if (visible(nb, p)) {
          in_visible[nb] = 1;
          visible_set.push_back(nb);
        } else {
          int a = faces[fi].v[e];
          int b = faces[fi].v[(e + 1) % 3];
          int slot = -1;
          for (int s = 0; s < 3; ++s) {
            if (faces[nb].v[s] == b && faces[nb].v[(s + 1) % 3] == a) slot = s;
          }
          horizon.push_back({a, b, nb, slot});
        }
      }
    }

    // Order the horizon into a loop by chaining end-to-start vertices.
    std::map<int, std::size_t> edge_by_start;
    for (std::size_t i = 0; i < horizon.size(); ++i) {
      edge_by_start[horizon[i].a] = i;
    }
    std::vector<HorizonEdge> loop;
    loop.reserve(horizon.size());
    int start = horizon.front().a;
    int cur = start;
    for (std::size_t i = 0; i < horizon.size(); ++i) {
      auto it = edge_by_start.find(cur);
      if (it == edge_by_start.end()) break;
      loop.push_back(horizon[it->second]);
      cur = loop.back().b;
      if (cur == start) break;
    }

    for (int fi : visible_set) faces[fi].alive = false;

    // One new face per horizon edge, fanned around p.
    std::vector<int> fresh;
    fresh.reserve(loop.size());
    for (const HorizonEdge& e : loop) {
      fresh.push_back(add_face(e.a, e.b, p));
    }
    const int m = static_cast<int>(fresh.size());
    for (int i = 0; i < m; ++i) {
      link(fresh[i], 0, loop[i].outside_face, loop[i].outside_slot);
      link(fresh[i], 1, fresh[(i + 1) % m], 2);
    }
  }
};

}  // namespace

Polyhedron convex_hull(const PointCloud& cloud) {
  const std::vector<Vec3>& pts = cloud.points;
  const int n = static_cast<int>(pts.size());
  if (n < 4) {
    throw DegenerateInput("convex hull needs at least 4 points");
  }

  double scale = 0.0;
  for (const Vec3& p : pts) scale = std::max(scale, p.cwiseAbs().maxCoeff());
  const double eps = 1e-10 * std::max(1.0, scale);

  // Initial simplex: lexicographically smallest point, farthest point,
  // farthest-from-line, farthest-from-plane. Ties resolve to the lowest
  // index, so the result only depends on the input order.
  auto lex_less = [&](int a, int b) {
    if (pts[a].x() != pts[b].x()) return pts[a].x() < pts[b].x();
    if (pts[a].y() != pts[b].y()) return pts[a].y() < pts[b].y();
    if (pts[a].z() != pts[b].z()) return pts[a].z() < pts[b].z();
    return a < b;
  };
  int i0 = 0;
  for (int i = 1; i < n; ++i) {
    if (lex_less(i, i0)) i0 = i;
  }

  int i1 = -1;
  double best = -1.0;
  for (int i = 0; i < n; ++i) {
    if (i == i0) continue;
    double d = (pts[i] - pts[i0]).squaredNorm();
    if (d > best) {
      best = d;
      i1 = i;
    }
  }
  if (i1 < 0 || std::sqrt(best) <= eps) {
    throw DegenerateInput("all points coincide");
  }

  Vec3 axis = (pts[i1] - pts[i0]).normalized();
  int i2 = -1;
  best = -1.0;
  for (int i = 0; i < n; ++i) {
    if (i == i0 || i == i1) continue;
    Vec3 v = pts[i] - pts[i0];
    double d = (v - v.dot(axis) * axis).squaredNorm();
    if (d > best) {
      best = d;
      i2 = i;
    }
  }
  if (i2 < 0 || std::sqrt(best) <= eps) {
    throw DegenerateInput("points are collinear");
  }

  Vec3 plane_n = (pts[i1] - pts[i0]).cross(pts[i2] - pts[i0]).normalized();
  int i3 = -1;
  best = -1.0;
  for (int i = 0; i < n; ++i) {
    if (i == i0 || i == i1 || i == i2) continue;
    double d = std::abs(plane_n.dot(pts[i] - pts[i0]));
    if (d > best) {
      best = d;
      i3 = i;
    }
  }
  if (i3 < 0 || best <= eps) {
    throw DegenerateInput("points are coplanar");
  }
  if (plane_n.dot(pts[i3] - pts[i0]) > 0.0) std::swap(i1, i2);

  HullBuilder hb(pts, eps);
  // Tetrahedron (i0, i1, i2) + apex i3 with all normals outward.
  int f0 = hb.add_face(i0, i1, i2);
  int f1 = hb.add_face(i1, i0, i3);
  int f2 = hb.add_face(i2, i1, i3);
  int f3 = hb.add_face(i0, i2, i3);
  hb.link(f0, 0, f1, 0);
  hb.link(f0, 1, f2, 0);
  hb.link(f0, 2, f3, 0);
  hb.link(f1, 1, f3, 2);
  hb.link(f1, 2, f2, 1);
  hb.link(f2, 2, f3, 1);

  for (int p = 0; p < n; ++p) {
    if (p == i0 || p == i1 || p == i2 || p == i3) continue;
    hb.insert_point(p);
  }

  // Compact: keep alive faces, renumber vertices by first appearance.
  Polyhedron poly;
  std::vector<int> remap(pts.size(), -1);
  for (const HullFace& f : hb.faces) {
    if (!f.alive) continue;
    std::array<int, 3> tri{};
    for (int e = 0; e < 3; ++e) {
      int src = f.v[e];
      if (remap[src] < 0) {
        remap[src] = static_cast<int>(poly.vertices.size());
        poly.vertices.push_back(pts[src]);
      }
      tri[e] = remap[src];
    }
    poly.faces.push_back(tri);
  }
  return poly;
}

}  // namespace seqplan
