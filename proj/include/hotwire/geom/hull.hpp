#pragma once

#include <span>
#include <vector>

#include "hotwire/geom/types.hpp"

namespace hotwire {

/// Strictly convex CCW polygon (no collinear vertices).
struct ConvexPolygon {
  std::vector<Vec2> vertices;

  std::size_t size() const { return vertices.size(); }
  bool contains(const Vec2& p) const;
  double distance(const Vec2& p) const;  // 0 inside
};

/// Andrew's monotone chain. Throws DegenerateGeometry when all points are
/// collinear (or fewer than three distinct points).
ConvexPolygon convex_hull(std::span<const Vec2> points);

/// Symmetric Hausdorff distance between two convex regions.
double hausdorff_convex(const ConvexPolygon& a, const ConvexPolygon& b);

/// Greedy vertex deletion: while the cheapest deletion keeps the Hausdorff
/// distance to `hull` below `beta` and more than `min_vertices` remain, drop
/// that vertex.
ConvexPolygon simplify_convex_hull(const ConvexPolygon& hull, double beta, std::size_t min_vertices);

}  // namespace hotwire
