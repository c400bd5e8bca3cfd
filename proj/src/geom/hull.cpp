#include "hotwire/geom/hull.hpp"

#include <algorithm>
#include <limits>

#include "hotwire/geom/polygon.hpp"

namespace hotwire {

bool ConvexPolygon::contains(const Vec2& p) const {
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i)
    if (cross2(vertices[(i + 1) % n] - vertices[i], p - vertices[i]) < 0.0) return false;
  return true;
}

double ConvexPolygon::distance(const Vec2& p) const {
  if (contains(p)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) best = std::min(best, point_segment_distance(p, vertices[i], vertices[(i + 1) % n]));
  return best;
}

ConvexPolygon convex_hull(std::span<const Vec2> points) {
  std::vector<Vec2> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) { return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y()); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) throw DegenerateGeometry("convex hull needs three distinct points");
  std::vector<Vec2> h(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross2(h[k - 1] - h[k - 2], p - h[k - 2]) <= 0.0) --k;
    h[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    const Vec2& p = pts[i];
    while (k >= t && cross2(h[k - 1] - h[k - 2], p - h[k - 2]) <= 0.0) --k;
    h[k++] = p;
  }
  h.resize(k - 1);
  if (h.size() < 3) throw DegenerateGeometry("convex hull of collinear points");
  return ConvexPolygon{std::move(h)};
}

namespace {

// For convex regions the directed distance sup_{x in A} d(x, B) is attained at
// a vertex of A.
double directed(const ConvexPolygon& a, const ConvexPolygon& b) {
  double d = 0.0;
  for (const auto& v : a.vertices) d = std::max(d, b.distance(v));
  return d;
}

}  // namespace

double hausdorff_convex(const ConvexPolygon& a, const ConvexPolygon& b) { return std::max(directed(a, b), directed(b, a)); }

ConvexPolygon simplify_convex_hull(const ConvexPolygon& hull, double beta, std::size_t min_vertices) {
  ConvexPolygon current = hull;
  while (current.size() > std::max<std::size_t>(min_vertices, 3)) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_j = 0;
    for (std::size_t j = 0; j < current.size(); ++j) {
      ConvexPolygon candidate = current;
      candidate.vertices.erase(candidate.vertices.begin() + static_cast<long>(j));
      const double d = hausdorff_convex(hull, candidate);
      if (d < best) {
        best = d;
        best_j = j;
      }
    }
    if (!(best < beta)) break;
    current.vertices.erase(current.vertices.begin() + static_cast<long>(best_j));
  }
  return current;
}

}  // namespace hotwire
