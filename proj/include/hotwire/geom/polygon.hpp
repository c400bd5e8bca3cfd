#pragma once

#include <memory>
#include <span>
#include <vector>

#include "hotwire/geom/types.hpp"

namespace hotwire {

/// Simple closed polygon, counter-clockwise; the last->first edge is implicit.
/// Clockwise input is reversed on construction.
class Polygon2 {
 public:
  Polygon2() = default;
  explicit Polygon2(std::vector<Vec2> vertices);

  const std::vector<Vec2>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  const Vec2& operator[](std::size_t i) const { return vertices_[i]; }
  const Vec2& next(std::size_t i) const { return vertices_[(i + 1) % vertices_.size()]; }

  double area() const;
  double perimeter() const;
  Vec2 centroid() const;
  double bbox_diagonal() const;
  Polygon2 translated(const Vec2& offset) const;

  // O(n^2); fine for contour-sized inputs.
  bool is_simple() const;

 private:
  std::vector<Vec2> vertices_;
};

double signed_area(std::span<const Vec2> ring);

/// Closed-segment intersection (touching counts).
bool segments_intersect(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1);

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b);

/// Even-odd membership with boundary points counted as inside.
bool point_in_polygon(std::span<const Vec2> ring, const Vec2& p);
inline bool point_in_polygon(const Polygon2& poly, const Vec2& p) { return point_in_polygon(poly.vertices(), p); }

/// Removes vertices whose neighbours are collinear with them within `tol`
/// (distance of the vertex from the chord through its neighbours).
std::vector<Vec2> merge_collinear(std::vector<Vec2> ring, double tol);

/// Uniform grid over a set of static segments for proximity queries.
class SegmentGrid {
 public:
  SegmentGrid() = default;
  SegmentGrid(std::vector<Vec2> a, std::vector<Vec2> b, int cells_per_side = 0);
  static SegmentGrid from_ring(std::span<const Vec2> ring);

  std::size_t size() const { return a_.size(); }
  const Vec2& start(std::size_t i) const { return a_[i]; }
  const Vec2& end(std::size_t i) const { return b_[i]; }

  /// Calls fn(segment index) once for each segment whose cell range overlaps
  /// the box [lo, hi].
  template <class Fn>
  void visit_box(const Vec2& lo, const Vec2& hi, Fn&& fn) const;

  bool segment_hits(const Vec2& p, const Vec2& q) const;
  double distance(const Vec2& p) const;
  bool polyline_hits(std::span<const Vec2> points, bool closed) const;

 private:
  int cell_x(double x) const;
  int cell_y(double y) const;

  std::vector<Vec2> a_, b_;
  Vec2 lo_ = Vec2::Zero();
  Vec2 cell_ = Vec2::Ones();
  int nx_ = 1, ny_ = 1;
  std::vector<std::vector<int>> cells_;
  mutable std::vector<unsigned> stamp_;
  mutable unsigned epoch_ = 0;
};

/// Grid-accelerated point_in_polygon for repeated queries against one ring.
class PolygonLocator {
 public:
  explicit PolygonLocator(std::vector<Vec2> ring, int cells_per_side = 0);

  bool contains(const Vec2& p) const;
  const std::vector<Vec2>& ring() const { return ring_; }

 private:
  std::vector<Vec2> ring_;
  Vec2 lo_, hi_, cell_;
  int n_ = 1;
  std::vector<std::vector<int>> edges_;  // per cell
  std::vector<Vec2> reference_;          // per cell
  std::vector<char> reference_inside_;   // per cell
};

template <class Fn>
void SegmentGrid::visit_box(const Vec2& lo, const Vec2& hi, Fn&& fn) const {
  if (a_.empty()) return;
  const int x0 = cell_x(lo.x()), x1 = cell_x(hi.x());
  const int y0 = cell_y(lo.y()), y1 = cell_y(hi.y());
  if (++epoch_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0u);
    epoch_ = 1;
  }
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      for (int s : cells_[static_cast<std::size_t>(y) * nx_ + x]) {
        if (stamp_[s] == epoch_) continue;
        stamp_[s] = epoch_;
        fn(s);
      }
    }
  }
}

}  // namespace hotwire
