#include <doctest.h>

#include <random>

#include "hotwire/fit/spline_fit.hpp"
#include "support/oracles.hpp"
#include "support/shapes.hpp"

using namespace hotwire;

namespace {

double point_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 e = b - a;
  const double t = std::clamp((p - a).dot(e) / e.squaredNorm(), 0.0, 1.0);
  return (a + t * e - p).norm();
}

double point_ring(const Vec2& p, const std::vector<Vec2>& ring) {
  double d = 1e300;
  for (std::size_t i = 0; i < ring.size(); ++i) d = std::min(d, point_segment(p, ring[i], ring[(i + 1) % ring.size()]));
  return d;
}

// Frozen-correspondence energy written out term by term. rows[i] holds the
// oracle basis weights of correspondence i.
double direct_energy(const FitState& s, const std::vector<std::vector<double>>& rows, const std::vector<Vec2>& points,
                     const FitConfig& cfg) {
  double e = 0.0;
  for (std::size_t i = 0; i < s.corr.size(); ++i) {
    const auto& k = s.corr[i];
    if (!k.active) continue;
    Vec2 r = -k.target;
    for (std::size_t j = 0; j < points.size(); ++j)
      if (rows[i][j] != 0.0) r += rows[i][j] * points[j];
    e += k.alpha * std::pow(r.dot(k.tangent), 2) + std::pow(r.dot(k.normal), 2);
  }
  return e + cfg.w * smoothness_energy(s.curve.with_control_points(points), cfg);
}

Polygon2 random_blob(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> A(0.0, 0.35), P(0.0, 2 * M_PI);
  const double a2 = A(rng) * 0.5, a3 = A(rng) * 0.4, p2 = P(rng), p3 = P(rng);
  std::vector<Vec2> v;
  for (int i = 0; i < n; ++i) {
    const double t = 2 * M_PI * i / n;
    const double r = 0.3 * (1.0 + a2 * std::cos(2 * t + p2) + a3 * std::cos(3 * t + p3));
    v.push_back(r * Vec2(std::cos(t), std::sin(t)));
  }
  return Polygon2(std::move(v));
}

}  // namespace

TEST_CASE("model gradient matches central differences of the direct energy") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> N(0.0, 0.01);
  FitConfig cfg;
  int instances = 0;
  for (int inst = 0; inst < 25; ++inst) {
    const Polygon2 g = inst % 3 == 0 ? test::star_polygon(4 + inst % 4, 0.4, 0.2, 120) : random_blob(rng, 80 + inst);
    const FitProblem prob(g.translated(-g.centroid()), cfg);
    FitState s = init_curve(prob, cfg);
    s.epsilon = cfg.epsilon0_rel * prob.d_bb;
    if (inst % 2) s.mode = CorrespondenceMode::ClosestPoint;
    // Move off the initial circle so tangential terms switch on.
    std::vector<Vec2> pts = s.curve.control_points();
    for (auto& p : pts) p += Vec2(N(rng), N(rng));
    s.curve = s.curve.with_control_points(pts);
    update_correspondences(s, prob, cfg);
    std::vector<std::vector<double>> rows;
    for (const auto& k : s.corr) rows.push_back(test::naive_basis_row(s.curve, k.u));

    const QuadraticModel m = build_model(s, cfg);
    const Eigen::VectorXd x = stack(pts);
    const Eigen::VectorXd g_an = m.gradient(x);
    Eigen::VectorXd g_fd(x.size());
    const double h = 1e-6;
    for (int i = 0; i < x.size(); ++i) {
      Eigen::VectorXd xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      g_fd[i] = (direct_energy(s, rows, unstack(xp), cfg) - direct_energy(s, rows, unstack(xm), cfg)) / (2 * h);
    }
    const double rel = (g_an - g_fd).norm() / g_fd.norm();
    CHECK(rel <= 1e-4);
    CHECK(m.value(x) == doctest::Approx(direct_energy(s, rows, pts, cfg)).epsilon(1e-9));
    ++instances;
  }
  CHECK(instances == 25);
}

TEST_CASE("newton step minimizes the model") {
  FitConfig cfg;
  const Polygon2 g = test::star_polygon(5, 0.4, 0.2, 200);
  const FitProblem prob(g.translated(-g.centroid()), cfg);
  FitState s = init_curve(prob, cfg);
  update_correspondences(s, prob, cfg);
  const QuadraticModel m = build_model(s, cfg);
  const Eigen::VectorXd x = stack(s.curve.control_points());
  const Eigen::VectorXd y = x + stack(newton_step(m, x));
  CHECK(m.gradient(y).norm() < 1e-8 * std::max(1.0, m.gradient(x).norm()));
  CHECK(m.value(y) <= m.value(x));
}

TEST_CASE("initial curve is safe and encloses the contour") {
  std::mt19937_64 rng(32);
  FitConfig cfg;
  for (int inst = 0; inst < 20; ++inst) {
    const Polygon2 g = inst % 2 ? random_blob(rng, 100) : test::star_polygon(3 + inst % 5, 0.4, 0.15, 150);
    const FitProblem prob(g.translated(-g.centroid()), cfg);
    const FitState s = init_curve(prob, cfg);
    CHECK(s.curve.size() == static_cast<std::size_t>(cfg.n_init));
    CHECK(curve_is_safe(s.curve, prob.g));
    const auto poly = s.curve.sample(kCurvePolygonSamples);
    for (const auto& v : prob.g.vertices()) CHECK(test::naive_inside(poly, v));
  }
}

TEST_CASE("average distance against a brute force oracle") {
  const Polygon2 g = test::regular_polygon(6, 0.4);
  const ClosedBSpline2 c = test::circle_spline(64, 0.45);
  const auto dense = c.sample(20000);
  double a = 0.0, b = 0.0;
  const int n = 1000;
  const double per = g.perimeter();
  const auto& v = g.vertices();
  for (int s = 0; s < n; ++s) {
    // Arc-length sample on g.
    double t = per * s / n;
    std::size_t k = 0;
    while ((v[(k + 1) % v.size()] - v[k]).norm() < t) t -= (v[(k + 1) % v.size()] - v[k]).norm(), ++k;
    const Vec2 p = v[k] + t * (v[(k + 1) % v.size()] - v[k]).normalized();
    double best = 1e300;
    for (const auto& q : dense) best = std::min(best, (q - p).norm());
    a += best;
    b += point_ring(c.eval(double(s) / n), v);
  }
  CHECK(average_distance(c, g, n) == doctest::Approx((a + b) / (2 * n)).epsilon(1e-4));
}

TEST_CASE("fit of a regular 64-gon") {
  const Polygon2 g = test::regular_polygon(64, 0.4, Vec2(0.1, -0.05));
  const FitResult r = fit(g);
  CHECK(r.iterations <= 30);
  CHECK(curve_is_safe(r.curve, g));
  CHECK(r.d_avg <= 1e-3 * g.bbox_diagonal());
  CHECK(r.curve.size() <= 120);
}

TEST_CASE("fit of a 200-vertex star") {
  const Polygon2 g = test::star_polygon(5, 0.4, 0.2, 200);
  const FitResult r = fit(g);
  CHECK(r.iterations <= 30);
  CHECK(curve_is_safe(r.curve, g));
  CHECK(r.d_avg <= 5e-3 * g.bbox_diagonal());
  CHECK(r.d_avg == doctest::Approx(average_distance(r.curve, g)));
}

TEST_CASE("fit energy decreases and the trace is complete") {
  FitConfig cfg;
  cfg.trace_distance = true;
  const Polygon2 g = test::star_polygon(4, 0.4, 0.25, 160);
  const FitResult r = fit(g, cfg);
  REQUIRE(!r.trace.empty());
  CHECK(r.trace.size() == static_cast<std::size_t>(r.iterations));
  CHECK(r.trace.back().d_avg < r.trace.front().d_avg);
  for (const auto& row : r.trace) CHECK(row.control_points <= cfg.n_total);
}

TEST_CASE("fit rejects bad input") {
  FitConfig bad;
  bad.epsilon_decay = 1.5;
  CHECK_THROWS_AS(fit(test::regular_polygon(8, 0.3), bad), InputError);
  // Bow tie.
  CHECK_THROWS_AS(fit(Polygon2({{0, 0}, {1, 1}, {1, 0}, {0, 1}})), InputError);
}
