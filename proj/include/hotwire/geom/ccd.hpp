#pragma once

#include <span>
#include <vector>

#include "hotwire/geom/polygon.hpp"

namespace hotwire {

/// Static polygon used as the obstacle for continuous collision detection of
/// a polyline whose vertices move linearly: p_i(t) = p_i + t * v_i.
class CollisionObstacle {
 public:
  explicit CollisionObstacle(const Polygon2& obstacle);

  /// Largest t in [0, cap] such that for every s in [0, t) the polyline does
  /// not touch an obstacle edge. Returns `cap` when nothing is hit. Assumes
  /// the polyline is currently clear of the obstacle.
  double max_step(std::span<const Vec2> samples, std::span<const Vec2> velocities, double cap, bool closed = false) const;

  bool intersects(std::span<const Vec2> polyline, bool closed) const;

  const SegmentGrid& edges() const { return grid_; }

 private:
  double events(std::span<const Vec2> samples, std::span<const Vec2> velocities, bool closed, double lo, double hi) const;

  SegmentGrid grid_;
  double cell_size_;
};

/// One-shot form. Throws InvalidState when the polyline already touches the
/// obstacle, InputError when the lists differ in length.
double ccd_max_step(std::span<const Vec2> samples, std::span<const Vec2> velocities, const Polygon2& obstacle, double cap,
                    bool closed = false);

/// Earliest time in [0, cap] at which a linearly moving point touches the
/// static segment [a, b]; +inf when it never does.
double point_segment_contact(const Vec2& p, const Vec2& v, const Vec2& a, const Vec2& b, double cap);

/// Earliest time in [0, cap] at which the static point q touches the moving
/// segment [p0 + t v0, p1 + t v1]; +inf when it never does.
double segment_point_contact(const Vec2& p0, const Vec2& v0, const Vec2& p1, const Vec2& v1, const Vec2& q, double cap);

}  // namespace hotwire
