#include "hotwire/geom/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hotwire {

double signed_area(std::span<const Vec2> ring) {
  double a = 0.0;
  for (std::size_t i = 0, n = ring.size(); i < n; ++i) a += cross2(ring[i], ring[(i + 1) % n]);
  return 0.5 * a;
}

Polygon2::Polygon2(std::vector<Vec2> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 3) throw DegenerateGeometry("polygon needs at least 3 vertices");
  if (signed_area(vertices_) < 0.0) std::reverse(vertices_.begin(), vertices_.end());
}

double Polygon2::area() const { return signed_area(vertices_); }

double Polygon2::perimeter() const {
  double l = 0.0;
  for (std::size_t i = 0; i < size(); ++i) l += (next(i) - vertices_[i]).norm();
  return l;
}

Vec2 Polygon2::centroid() const {
  double a = 0.0;
  Vec2 c = Vec2::Zero();
  for (std::size_t i = 0; i < size(); ++i) {
    const double w = cross2(vertices_[i], next(i));
    a += w;
    c += w * (vertices_[i] + next(i));
  }
  if (std::abs(a) <= std::numeric_limits<double>::min()) {
    c = Vec2::Zero();
    for (const auto& v : vertices_) c += v;
    return c / static_cast<double>(size());
  }
  return c / (3.0 * a);
}

double Polygon2::bbox_diagonal() const {
  Vec2 lo = vertices_.front(), hi = vertices_.front();
  for (const auto& v : vertices_) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  return (hi - lo).norm();
}

Polygon2 Polygon2::translated(const Vec2& offset) const {
  std::vector<Vec2> v = vertices_;
  for (auto& p : v) p += offset;
  return Polygon2(std::move(v));
}

bool Polygon2::is_simple() const {
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) {
        // Adjacent edges may only share their common vertex.
        const Vec2& shared = j == i + 1 ? vertices_[j] : vertices_[i];
        const Vec2& pi = j == i + 1 ? vertices_[i] : next(i);
        const Vec2& pj = j == i + 1 ? next(j) : vertices_[j];
        if (point_segment_distance(pi, shared, pj) <= 0.0 || point_segment_distance(pj, shared, pi) <= 0.0) return false;
        continue;
      }
      if (segments_intersect(vertices_[i], next(i), vertices_[j], next(j))) return false;
    }
  }
  return true;
}

namespace {

// Near-collinear triples count as collinear so that the overlap test decides.
int orientation(const Vec2& a, const Vec2& b, const Vec2& c) {
  const Vec2 ab = b - a, ac = c - a;
  const double v = cross2(ab, ac);
  if (std::abs(v) <= 1e-12 * ab.norm() * ac.norm()) return 0;
  return (v > 0.0) - (v < 0.0);
}

bool on_segment_collinear(const Vec2& a, const Vec2& b, const Vec2& p) {
  return p.x() >= std::min(a.x(), b.x()) && p.x() <= std::max(a.x(), b.x()) && p.y() >= std::min(a.y(), b.y()) &&
         p.y() <= std::max(a.y(), b.y());
}

}  // namespace

bool segments_intersect(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1) {
  const int o1 = orientation(a0, a1, b0);
  const int o2 = orientation(a0, a1, b1);
  const int o3 = orientation(b0, b1, a0);
  const int o4 = orientation(b0, b1, a1);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment_collinear(a0, a1, b0)) return true;
  if (o2 == 0 && on_segment_collinear(a0, a1, b1)) return true;
  if (o3 == 0 && on_segment_collinear(b0, b1, a0)) return true;
  if (o4 == 0 && on_segment_collinear(b0, b1, a1)) return true;
  return false;
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (a + t * ab - p).norm();
}

namespace {

double boundary_tolerance(const Vec2& p) { return 1e-12 * std::max({1.0, std::abs(p.x()), std::abs(p.y())}); }

}  // namespace

bool point_in_polygon(std::span<const Vec2> ring, const Vec2& p) {
  const std::size_t n = ring.size();
  const double eps = boundary_tolerance(p);
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = ring[i];
    const Vec2& b = ring[j];
    if (point_segment_distance(p, a, b) <= eps) return true;
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x = a.x() + (p.y() - a.y()) / (b.y() - a.y()) * (b.x() - a.x());
      if (p.x() < x) inside = !inside;
    }
  }
  return inside;
}

std::vector<Vec2> merge_collinear(std::vector<Vec2> ring, double tol) {
  bool changed = true;
  while (changed && ring.size() > 3) {
    changed = false;
    std::vector<Vec2> out;
    out.reserve(ring.size());
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2& prev = out.empty() ? ring[(i + n - 1) % n] : out.back();
      const Vec2& cur = ring[i];
      const Vec2& nxt = ring[(i + 1) % n];
      const Vec2 chord = nxt - prev;
      const double len = chord.norm();
      const double dev = len > 0.0 ? std::abs(cross2(chord, cur - prev)) / len : (cur - prev).norm();
      const bool between = (cur - prev).dot(chord) >= 0.0 && (nxt - cur).dot(chord) >= 0.0;
      if (dev <= tol && between && out.size() + (n - i - 1) >= 3) {
        changed = true;
        continue;
      }
      out.push_back(cur);
    }
    ring = std::move(out);
  }
  return ring;
}

// --- SegmentGrid -------------------------------------------------------------

SegmentGrid::SegmentGrid(std::vector<Vec2> a, std::vector<Vec2> b, int cells_per_side)
    : a_(std::move(a)), b_(std::move(b)) {
  if (a_.empty()) return;
  Vec2 lo = a_.front(), hi = a_.front();
  for (std::size_t i = 0; i < a_.size(); ++i) {
    lo = lo.cwiseMin(a_[i]).cwiseMin(b_[i]);
    hi = hi.cwiseMax(a_[i]).cwiseMax(b_[i]);
  }
  const Vec2 ext = (hi - lo).cwiseMax(Vec2::Constant(1e-12));
  lo_ = lo - 1e-9 * ext;
  const Vec2 span = ext * (1.0 + 2e-9);
  if (cells_per_side <= 0)
    cells_per_side = std::clamp(static_cast<int>(2.0 * std::sqrt(static_cast<double>(a_.size()))), 1, 256);
  nx_ = ny_ = cells_per_side;
  cell_ = Vec2(span.x() / nx_, span.y() / ny_);
  cells_.assign(static_cast<std::size_t>(nx_) * ny_, {});
  stamp_.assign(a_.size(), 0u);
  for (std::size_t s = 0; s < a_.size(); ++s) {
    const Vec2 slo = a_[s].cwiseMin(b_[s]);
    const Vec2 shi = a_[s].cwiseMax(b_[s]);
    for (int y = cell_y(slo.y()); y <= cell_y(shi.y()); ++y)
      for (int x = cell_x(slo.x()); x <= cell_x(shi.x()); ++x)
        cells_[static_cast<std::size_t>(y) * nx_ + x].push_back(static_cast<int>(s));
  }
}

SegmentGrid SegmentGrid::from_ring(std::span<const Vec2> ring) {
  std::vector<Vec2> a(ring.begin(), ring.end());
  std::vector<Vec2> b(ring.size());
  for (std::size_t i = 0; i < ring.size(); ++i) b[i] = ring[(i + 1) % ring.size()];
  return SegmentGrid(std::move(a), std::move(b));
}

int SegmentGrid::cell_x(double x) const {
  return std::clamp(static_cast<int>(std::floor((x - lo_.x()) / cell_.x())), 0, nx_ - 1);
}

int SegmentGrid::cell_y(double y) const {
  return std::clamp(static_cast<int>(std::floor((y - lo_.y()) / cell_.y())), 0, ny_ - 1);
}

bool SegmentGrid::segment_hits(const Vec2& p, const Vec2& q) const {
  bool hit = false;
  visit_box(p.cwiseMin(q), p.cwiseMax(q), [&](int s) {
    if (!hit && segments_intersect(p, q, a_[s], b_[s])) hit = true;
  });
  return hit;
}

double SegmentGrid::distance(const Vec2& p) const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < a_.size(); ++s) best = std::min(best, point_segment_distance(p, a_[s], b_[s]));
  return best;
}

bool SegmentGrid::polyline_hits(std::span<const Vec2> points, bool closed) const {
  const std::size_t n = points.size();
  if (n == 1) return distance(points[0]) <= 0.0;
  const std::size_t segs = closed ? n : n - 1;
  for (std::size_t i = 0; i < segs; ++i)
    if (segment_hits(points[i], points[(i + 1) % n])) return true;
  return false;
}

// --- PolygonLocator ----------------------------------------------------------

PolygonLocator::PolygonLocator(std::vector<Vec2> ring, int cells_per_side) : ring_(std::move(ring)) {
  if (ring_.size() < 3) throw DegenerateGeometry("polygon needs at least 3 vertices");
  lo_ = hi_ = ring_.front();
  for (const auto& v : ring_) {
    lo_ = lo_.cwiseMin(v);
    hi_ = hi_.cwiseMax(v);
  }
  const Vec2 ext = (hi_ - lo_).cwiseMax(Vec2::Constant(1e-12));
  lo_ -= 1e-9 * ext;
  hi_ += 1e-9 * ext;
  if (cells_per_side <= 0)
    cells_per_side = std::clamp(static_cast<int>(2.0 * std::sqrt(static_cast<double>(ring_.size()))), 4, 256);
  n_ = cells_per_side;
  cell_ = (hi_ - lo_) / n_;
  const std::size_t cells = static_cast<std::size_t>(n_) * n_;
  edges_.assign(cells, {});
  reference_.resize(cells);
  reference_inside_.assign(cells, 0);

  const std::size_t m = ring_.size();
  auto cx = [&](double x) { return std::clamp(static_cast<int>(std::floor((x - lo_.x()) / cell_.x())), 0, n_ - 1); };
  auto cy = [&](double y) { return std::clamp(static_cast<int>(std::floor((y - lo_.y()) / cell_.y())), 0, n_ - 1); };
  for (std::size_t e = 0; e < m; ++e) {
    const Vec2& a = ring_[e];
    const Vec2& b = ring_[(e + 1) % m];
    const Vec2 slo = a.cwiseMin(b), shi = a.cwiseMax(b);
    for (int y = cy(slo.y()); y <= cy(shi.y()); ++y)
      for (int x = cx(slo.x()); x <= cx(shi.x()); ++x) edges_[static_cast<std::size_t>(y) * n_ + x].push_back(static_cast<int>(e));
  }

  // Reference points sit off-center so they are unlikely to fall on an edge.
  std::vector<double> xs;
  for (int y = 0; y < n_; ++y) {
    const double ry = lo_.y() + (y + 0.5137) * cell_.y();
    xs.clear();
    for (std::size_t e = 0; e < m; ++e) {
      const Vec2& a = ring_[e];
      const Vec2& b = ring_[(e + 1) % m];
      if ((a.y() > ry) != (b.y() > ry)) xs.push_back(a.x() + (ry - a.y()) / (b.y() - a.y()) * (b.x() - a.x()));
    }
    std::sort(xs.begin(), xs.end());
    for (int x = 0; x < n_; ++x) {
      const double rx = lo_.x() + (x + 0.4871) * cell_.x();
      const std::size_t c = static_cast<std::size_t>(y) * n_ + x;
      reference_[c] = Vec2(rx, ry);
      const auto right = xs.end() - std::upper_bound(xs.begin(), xs.end(), rx);
      reference_inside_[c] = static_cast<char>(right % 2 == 1);
    }
  }
}

bool PolygonLocator::contains(const Vec2& p) const {
  if (p.x() < lo_.x() || p.y() < lo_.y() || p.x() > hi_.x() || p.y() > hi_.y()) return false;
  const int x = std::clamp(static_cast<int>((p.x() - lo_.x()) / cell_.x()), 0, n_ - 1);
  const int y = std::clamp(static_cast<int>((p.y() - lo_.y()) / cell_.y()), 0, n_ - 1);
  const std::size_t c = static_cast<std::size_t>(y) * n_ + x;
  const auto& cell_edges = edges_[c];
  bool inside = reference_inside_[c] != 0;
  if (cell_edges.empty()) return inside;
  const Vec2& r = reference_[c];
  const double eps = boundary_tolerance(p);
  const std::size_t m = ring_.size();
  const Vec2 rp = p - r;
  for (int e : cell_edges) {
    const Vec2& a = ring_[e];
    const Vec2& b = ring_[(e + 1) % m];
    if (point_segment_distance(p, a, b) <= eps) return true;
    const bool sa = cross2(rp, a - r) > 0.0;
    const bool sb = cross2(rp, b - r) > 0.0;
    if (sa == sb) continue;
    const Vec2 ab = b - a;
    const bool sr = cross2(ab, r - a) > 0.0;
    const bool sp = cross2(ab, p - a) > 0.0;
    if (sr != sp) inside = !inside;
  }
  return inside;
}

}  // namespace hotwire
