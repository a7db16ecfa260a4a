#pragma once

#include <vector>

#include "seqplan/geometry.hpp"

namespace seqplan::detail {

/// Convex polytope collision proxy in the body frame. Cylinders are
/// approximated by a prism over a regular cap polygon; the facet count is
/// a simulation parameter independent of the hull sampling density.
struct ConvexShape {
  std::vector<Vec3> verts;
  struct Face {
    Vec3 normal;             // unit outward
    std::vector<int> verts;  // CCW seen from outside
  };
  std::vector<Face> faces;
  std::vector<Vec3> edge_dirs;  // unique edge directions, unit

  static ConvexShape from_shape(const Shape& shape, int cylinder_facets);
};

/// Per-step world-space cache of one body's collision data.
struct WorldShape {
  const ConvexShape* local = nullptr;
  std::vector<Vec3> verts;
  std::vector<Vec3> face_normals;
  std::vector<Vec3> edge_dirs;
  Vec3 center{0.0, 0.0, 0.0};
  Vec3 aabb_min{0.0, 0.0, 0.0};
  Vec3 aabb_max{0.0, 0.0, 0.0};

  void update(const ConvexShape& shape, const Pose& pose);
};

struct ContactPoint {
  Vec3 position{0.0, 0.0, 0.0};
  double depth = 0.0;  // > 0 penetrating, >= -margin when generated
};

struct ContactManifold {
  Vec3 normal{0.0, 0.0, 1.0};  // from A towards B
  std::vector<ContactPoint> points;
};

bool aabb_overlap(const WorldShape& a, const WorldShape& b, double margin);

/// SAT over face normals and unique edge-direction cross products, then a
/// reference/incident face clip for the manifold. Returns false when the
/// shapes are separated by more than `margin`. Deterministic: axes are
/// scanned in a fixed order and near-ties prefer face axes.
bool collide(const WorldShape& a, const WorldShape& b, double margin,
             ContactManifold& out);

/// Boolean overlap query (no manifold, zero margin).
bool overlaps(const WorldShape& a, const WorldShape& b);

}  // namespace seqplan::detail
