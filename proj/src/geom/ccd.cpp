#include "hotwire/geom/ccd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hotwire {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kParamTol = 1e-12;

// Real roots of c2 t^2 + c1 t + c0 in ascending order; tangential (double)
// roots are kept even when rounding makes the discriminant slightly negative.
int solve_quadratic(double c2, double c1, double c0, double roots[2]) {
  const double scale = std::max({std::abs(c2), std::abs(c1), std::abs(c0)});
  if (scale == 0.0) return -1;  // identically zero
  if (std::abs(c2) <= 1e-14 * scale) {
    if (std::abs(c1) <= 1e-14 * scale) return 0;
    roots[0] = -c0 / c1;
    return 1;
  }
  double disc = c1 * c1 - 4.0 * c2 * c0;
  if (disc < 0.0) {
    if (disc < -1e-12 * c1 * c1 && disc < -1e-24 * scale * scale) return 0;
    disc = 0.0;
  }
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (c1 + std::copysign(sq, c1));
  double r0 = q / c2;
  double r1 = q != 0.0 ? c0 / q : r0;
  if (r0 > r1) std::swap(r0, r1);
  roots[0] = r0;
  roots[1] = r1;
  return 2;
}

double clamp_time(double t) { return (t < 0.0 && t > -1e-14) ? 0.0 : t; }

}  // namespace

double point_segment_contact(const Vec2& p, const Vec2& v, const Vec2& a, const Vec2& b, double cap) {
  const Vec2 e = b - a;
  const double e2 = e.squaredNorm();
  if (e2 == 0.0) {
    // Degenerate edge: point-point contact.
    const Vec2 w = a - p;
    const double v2 = v.squaredNorm();
    if (w.squaredNorm() == 0.0) return 0.0;
    if (v2 == 0.0) return kInf;
    const double t = w.dot(v) / v2;
    if (t < 0.0 || t > cap) return kInf;
    return (p + t * v - a).norm() <= 1e-12 * std::sqrt(w.squaredNorm()) ? t : kInf;
  }
  const double f0 = cross2(e, p - a);
  const double f1 = cross2(e, v);
  const double scale = std::sqrt(e2);
  if (std::abs(f1) > 1e-15 * scale * v.norm()) {
    const double t = clamp_time(-f0 / f1);
    if (t < 0.0 || t > cap) return kInf;
    const double s = (p + t * v - a).dot(e) / e2;
    return (s >= -kParamTol && s <= 1.0 + kParamTol) ? t : kInf;
  }
  // Moving parallel to the edge; only a collinear point can reach it.
  if (std::abs(f0) > 1e-13 * scale * std::max(1.0, (p - a).norm())) return kInf;
  const double s0 = (p - a).dot(e) / e2;
  if (s0 >= 0.0 && s0 <= 1.0) return 0.0;
  const double ds = v.dot(e) / e2;
  if (ds == 0.0) return kInf;
  const double target = s0 < 0.0 ? 0.0 : 1.0;
  const double t = (target - s0) / ds;
  return (t >= 0.0 && t <= cap) ? t : kInf;
}

double segment_point_contact(const Vec2& p0, const Vec2& v0, const Vec2& p1, const Vec2& v1, const Vec2& q, double cap) {
  const Vec2 d = p1 - p0;
  const Vec2 dv = v1 - v0;
  const Vec2 w = q - p0;
  const double c0 = cross2(d, w);
  const double c1 = cross2(dv, w) - cross2(d, v0);
  const double c2 = -cross2(dv, v0);
  double roots[2];
  const int count = solve_quadratic(c2, c1, c0, roots);
  if (count < 0) {
    // q stays on the carrier line; contact starts when an endpoint reaches it.
    return std::min(point_segment_contact(q, Vec2(-v0), p0, p0, cap), point_segment_contact(q, Vec2(-v1), p1, p1, cap));
  }
  for (int i = 0; i < count; ++i) {
    const double t = clamp_time(roots[i]);
    if (t < 0.0 || t > cap) continue;
    const Vec2 a = p0 + t * v0;
    const Vec2 dd = d + t * dv;
    const double dd2 = dd.squaredNorm();
    if (dd2 == 0.0) {
      if ((q - a).norm() <= 1e-12) return t;
      continue;
    }
    const double s = (q - a).dot(dd) / dd2;
    if (s >= -kParamTol && s <= 1.0 + kParamTol) return t;
  }
  return kInf;
}

CollisionObstacle::CollisionObstacle(const Polygon2& obstacle) : grid_(SegmentGrid::from_ring(obstacle.vertices())) {
  double len = 0.0;
  for (std::size_t i = 0; i < grid_.size(); ++i) len += (grid_.end(i) - grid_.start(i)).norm();
  cell_size_ = std::max(len / static_cast<double>(grid_.size()), 1e-12);
}

bool CollisionObstacle::intersects(std::span<const Vec2> polyline, bool closed) const {
  return grid_.polyline_hits(polyline, closed);
}

double CollisionObstacle::events(std::span<const Vec2> p, std::span<const Vec2> v, bool closed, double lo, double hi) const {
  double best = kInf;
  const std::size_t n = p.size();
  if (n == 1) {
    const Vec2 a = p[0] + lo * v[0], b = p[0] + hi * v[0];
    grid_.visit_box(a.cwiseMin(b), a.cwiseMax(b), [&](int s) {
      best = std::min(best, point_segment_contact(p[0], v[0], grid_.start(s), grid_.end(s), hi));
    });
    return best;
  }
  const std::size_t segs = closed ? n : n - 1;
  for (std::size_t i = 0; i < segs; ++i) {
    const std::size_t j = (i + 1) % n;
    if (v[i].squaredNorm() == 0.0 && v[j].squaredNorm() == 0.0) continue;
    const Vec2 a0 = p[i] + lo * v[i], a1 = p[i] + hi * v[i];
    const Vec2 b0 = p[j] + lo * v[j], b1 = p[j] + hi * v[j];
    const Vec2 blo = a0.cwiseMin(a1).cwiseMin(b0).cwiseMin(b1);
    const Vec2 bhi = a0.cwiseMax(a1).cwiseMax(b0).cwiseMax(b1);
    grid_.visit_box(blo, bhi, [&](int s) {
      const Vec2& ea = grid_.start(s);
      const Vec2& eb = grid_.end(s);
      const double limit = std::min(best, hi);
      double t = point_segment_contact(p[i], v[i], ea, eb, limit);
      t = std::min(t, point_segment_contact(p[j], v[j], ea, eb, limit));
      t = std::min(t, segment_point_contact(p[i], v[i], p[j], v[j], ea, limit));
      t = std::min(t, segment_point_contact(p[i], v[i], p[j], v[j], eb, limit));
      best = std::min(best, t);
    });
  }
  return best;
}

double CollisionObstacle::max_step(std::span<const Vec2> samples, std::span<const Vec2> velocities, double cap,
                                   bool closed) const {
  if (samples.size() != velocities.size()) throw InputError("ccd: samples and velocities differ in length");
  if (samples.empty() || grid_.size() == 0) return cap;
  double vmax = 0.0;
  for (const auto& v : velocities) vmax = std::max(vmax, v.norm());
  if (vmax == 0.0) return cap;
  // Search in growing time windows so that swept boxes stay small when the
  // first contact is near.
  double lo = 0.0;
  double hi = std::min(cap, 4.0 * cell_size_ / vmax);
  while (true) {
    const double t = events(samples, velocities, closed, lo, hi);
    if (t <= hi) return t;
    if (hi >= cap) return cap;
    lo = hi;
    hi = std::min(cap, 2.0 * hi);
  }
}

double ccd_max_step(std::span<const Vec2> samples, std::span<const Vec2> velocities, const Polygon2& obstacle, double cap,
                    bool closed) {
  if (samples.size() != velocities.size()) throw InputError("ccd: samples and velocities differ in length");
  CollisionObstacle ob(obstacle);
  if (ob.intersects(samples, closed)) throw InvalidState("ccd: polyline already touches the obstacle");
  return ob.max_step(samples, velocities, cap, closed);
}

}  // namespace hotwire
