#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "hotwire/geom/types.hpp"

namespace hotwire {

/// Indexed triangle soup.
struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;

  /// Throws InputError on empty meshes or out-of-range indices.
  void validate() const;

  Vec3 bbox_min() const;
  Vec3 bbox_max() const;
  double d_bb() const;

  double surface_area() const;
};

/// Area-weighted uniform samples on the surface, deterministic in `seed`.
std::vector<Vec3> sample_surface(const TriMesh& mesh, std::size_t count, std::uint64_t seed);

/// Closed cylinder about the z axis, outward-oriented.
TriMesh make_cylinder(double radius, double z0, double z1, int segments = 64);

/// Axis-aligned closed box, outward-oriented.
TriMesh make_box(const Vec3& lo, const Vec3& hi);

/// Concatenation of meshes.
TriMesh merge(const TriMesh& a, const TriMesh& b);

}  // namespace hotwire
