#pragma once

#include <array>
#include <vector>

#include "hotwire/geom/types.hpp"

namespace hotwire {

inline constexpr int kMaxDegree = 5;

/// Number of curve samples used wherever a curve stands in as a polygon
/// (region membership, safety checks).
inline constexpr int kCurvePolygonSamples = 2048;

// Nonzero basis functions of a periodic B-spline at one parameter value.
// Entry a belongs to control point index[a]; d0/d1/d2 are the function value
// and its first two derivatives with respect to u.
struct BasisSample {
  int span = 0;
  int count = 0;
  std::array<int, kMaxDegree + 1> index{};
  std::array<double, kMaxDegree + 1> d0{};
  std::array<double, kMaxDegree + 1> d1{};
  std::array<double, kMaxDegree + 1> d2{};

  double weight(int control, int order = 0) const;
};

struct FrenetFrame {
  Vec2 tangent;
  Vec2 normal;  // points toward the center of curvature
  double radius = 0.0;

  bool flat() const;
};

/// Closed (periodic) planar B-spline over u in [0, 1).
///
/// With n control points the knot vector holds n values t_0 = 0 <= t_1 <= ...
/// < 1 and is extended periodically, t_{j+n} = t_j + 1. The curve is
/// c(u) = sum_j P_{j mod n} N_{j,p}(u), N_{j,p} supported on [t_j, t_{j+p+1}],
/// so c(u + 1) = c(u) with C^(p-1) continuity everywhere (for simple knots).
class ClosedBSpline2 {
 public:
  ClosedBSpline2(int degree, std::vector<Vec2> control_points, std::vector<double> knots);

  /// Uniform knots t_j = j / n.
  static ClosedBSpline2 uniform(int degree, std::vector<Vec2> control_points);

  int degree() const { return degree_; }
  std::size_t size() const { return points_.size(); }
  const std::vector<Vec2>& control_points() const { return points_; }
  const std::vector<double>& knots() const { return knots_; }

  /// Periodically extended knot t_j for any integer j.
  double knot(long j) const;

  BasisSample basis(double u) const;

  /// order 0: position, 1: first derivative, 2: second derivative.
  Vec2 eval(double u, int order = 0) const;

  FrenetFrame frenet(double u) const;

  ClosedBSpline2 insert_knot(double u) const;

  ClosedBSpline2 with_control_points(std::vector<Vec2> control_points) const;
  ClosedBSpline2 translated(const Vec2& offset) const;

  /// Positions at u = i / n, i = 0..n-1.
  std::vector<Vec2> sample(std::size_t n) const;

  /// Parameter interval [t_a, t_{a+p+1}] on which control point a has support.
  std::pair<double, double> support(int control) const;

 private:
  int degree_;
  std::vector<Vec2> points_;
  std::vector<double> knots_;
};

inline Vec2 bspline_eval(const ClosedBSpline2& curve, double u, int order) { return curve.eval(u, order); }
inline FrenetFrame frenet_data(const ClosedBSpline2& curve, double u) { return curve.frenet(u); }
inline ClosedBSpline2 insert_knot(const ClosedBSpline2& curve, double u) { return curve.insert_knot(u); }

}  // namespace hotwire
