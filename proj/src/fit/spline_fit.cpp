#include "hotwire/fit/spline_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hotwire/geom/hull.hpp"

namespace hotwire {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kDenseClosest = 4096;
constexpr int kSafetySamplesPerSpan = 256;

double wrap01(double u) {
  double w = u - std::floor(u);
  return w >= 1.0 ? 0.0 : w;
}

double sd_energy(const Vec2& r, const Vec2& t, const Vec2& n, double d, double rho) {
  const double tn = r.dot(t), nn = r.dot(n);
  if (d < 0.0) {
    const double alpha = std::isinf(rho) ? 0.0 : d / (d - rho);
    return alpha * tn * tn + nn * nn;
  }
  return nn * nn;
}

FrenetFrame safe_frenet(const ClosedBSpline2& curve, double u) {
  try {
    return curve.frenet(u);
  } catch (const DegenerateGeometry&) {
    // Cusp: borrow the tangent from a nearby chord.
    const double h = 1e-6;
    Vec2 t = curve.eval(u + h) - curve.eval(u - h);
    if (t.squaredNorm() == 0.0) t = Vec2::UnitX();
    FrenetFrame f;
    f.tangent = t.normalized();
    f.normal = perp(f.tangent);
    f.radius = kInf;
    return f;
  }
}

struct SmoothSample {
  double u;
  double w1, w2;  // weights of |c'|^2 and |c''|^2
};

// Quadrature for the smoothness integral. KnotSpan measures derivatives in
// each span's own parameter, so dense knots are not penalised.
std::vector<SmoothSample> smooth_quadrature(const ClosedBSpline2& curve, const FitConfig& cfg) {
  std::vector<SmoothSample> q;
  if (cfg.smooth_parameter == SmoothParameter::Unit) {
    const double w = 1.0 / cfg.n_samples;
    for (int j = 0; j < cfg.n_samples; ++j) q.push_back({static_cast<double>(j) / cfg.n_samples, w, w});
    return q;
  }
  const int n = static_cast<int>(curve.size());
  const double per_span = static_cast<double>(cfg.n_samples) / n;
  const int m = std::max(2, static_cast<int>(std::ceil(per_span)));
  for (int j = 0; j < n; ++j) {
    const double t0 = curve.knot(j), dt = curve.knot(j + 1) - t0;
    if (dt <= 0.0) continue;
    // Integral over the span in its local parameter s = (u - t0) / dt.
    const double w = 1.0 / m;
    for (int k = 0; k < m; ++k) q.push_back({wrap01(t0 + dt * (k + 0.5) / m), w * dt * dt, w * dt * dt * dt * dt});
  }
  return q;
}

}  // namespace

void FitConfig::validate() const {
  if (degree < 1 || degree > kMaxDegree) throw InputError("fit degree out of range");
  if (n_init < degree + 1 || n_total < n_init || n_add < 0) throw InputError("invalid control point budget");
  if (!(epsilon_decay > 0.0 && epsilon_decay < 1.0)) throw InputError("epsilon_decay must lie in (0, 1)");
  if (contour_unit < 0.0) throw InputError("contour_unit must be non-negative");
  if (n_samples < 3 || max_iter < 0 || ccd_refinement < 0 || ccd_refinement > 16) throw InputError("invalid fit sampling");
  if (w < 0.0 || eta0 < 0.0 || eta1 < 0.0 || beta_rel < 0.0 || epsilon0_rel < 0.0) throw InputError("negative weight");
}

Eigen::VectorXd stack(const std::vector<Vec2>& points) {
  Eigen::VectorXd x(2 * points.size());
  for (std::size_t i = 0; i < points.size(); ++i) x.segment<2>(2 * i) = points[i];
  return x;
}

std::vector<Vec2> unstack(const Eigen::VectorXd& x) {
  std::vector<Vec2> p(x.size() / 2);
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = x.segment<2>(2 * i);
  return p;
}

FitProblem::FitProblem(Polygon2 contour, const FitConfig& cfg)
    : g(std::move(contour)), obstacle(g), edges(SegmentGrid::from_ring(g.vertices())) {
  cfg.validate();
  d_bb = g.bbox_diagonal();
  if (!(d_bb > 0.0)) throw DegenerateGeometry("contour has zero extent");
  const ConvexPolygon full = convex_hull(g.vertices());
  const ConvexPolygon simple = simplify_convex_hull(full, cfg.beta_rel * d_bb, cfg.min_hull_vertices);
  hull = simple.vertices;
  const auto& v = g.vertices();
  const int n = static_cast<int>(v.size());
  start_vertex = static_cast<int>(std::find(v.begin(), v.end(), hull.front()) - v.begin());
  if (start_vertex >= n) throw DegenerateGeometry("hull vertex not found on contour");

  std::vector<double> len(n);
  double total = 0.0;
  for (int k = 0; k < n; ++k) {
    const int i = (start_vertex + k) % n;
    len[k] = (v[(i + 1) % n] - v[i]).norm();
    total += len[k];
  }
  const int ns = cfg.n_samples;
  int k = 0;
  double acc = 0.0;  // arc length at the start of edge k
  for (int s = 0; s < ns; ++s) {
    const double target = total * s / ns;
    while (k < n - 1 && acc + len[k] <= target) acc += len[k++];
    const int i = (start_vertex + k) % n;
    const double f = len[k] > 0.0 ? std::clamp((target - acc) / len[k], 0.0, 1.0) : 0.0;
    samples.push_back(v[i] + f * (v[(i + 1) % n] - v[i]));
    sample_arc.push_back(static_cast<double>(s) / ns);
    sample_edge.push_back(i);
    sample_at_vertex.push_back(f == 0.0);
  }
}

namespace {

// Arc-length ratio of each hull vertex along g, measured from the start vertex.
std::vector<double> hull_parameters(const FitProblem& problem) {
  const auto& v = problem.g.vertices();
  const int n = static_cast<int>(v.size());
  std::vector<double> arc(n + 1, 0.0);
  for (int k = 0; k < n; ++k) {
    const int i = (problem.start_vertex + k) % n;
    arc[k + 1] = arc[k] + (v[(i + 1) % n] - v[i]).norm();
  }
  std::vector<double> out;
  for (const auto& h : problem.hull) {
    const int i = static_cast<int>(std::find(v.begin(), v.end(), h) - v.begin());
    const int k = ((i - problem.start_vertex) % n + n) % n;
    out.push_back(arc[k] / arc[n]);
  }
  return out;
}

}  // namespace

FitState init_curve(const FitProblem& problem, const FitConfig& cfg) {
  const auto& hull = problem.hull;
  const int nh = static_cast<int>(hull.size());
  const std::vector<double> uh = hull_parameters(problem);
  std::vector<double> ang(nh + 1);
  ang[0] = std::atan2(hull[0].y(), hull[0].x());
  for (int k = 1; k <= nh; ++k) {
    const Vec2& h = hull[k % nh];
    double a = std::atan2(h.y(), h.x());
    while (a <= ang[k - 1]) a += 2.0 * M_PI;
    while (a > ang[k - 1] + 2.0 * M_PI) a -= 2.0 * M_PI;
    ang[k] = a;
  }
  // Hull vertex order must wind once around the centre.
  ang[nh] = ang[0] + 2.0 * M_PI;

  std::vector<std::pair<double, double>> knots_angles;  // (u, angle)
  for (int k = 0; k < nh; ++k) knots_angles.emplace_back(uh[k], ang[k]);
  // Extra control points go inside the hull arcs in proportion to arc length.
  const int extra = std::max(0, cfg.n_init - nh);
  std::vector<int> count(nh, 0);
  std::vector<std::pair<double, int>> remainder;
  int placed = 0;
  for (int k = 0; k < nh; ++k) {
    const double share = extra * ((k + 1 < nh ? uh[k + 1] : 1.0) - uh[k]);
    count[k] = static_cast<int>(std::floor(share));
    placed += count[k];
    remainder.emplace_back(-(share - count[k]), k);
  }
  std::sort(remainder.begin(), remainder.end());
  for (int i = 0; placed < extra; ++i, ++placed) ++count[remainder[i % nh].second];
  for (int k = 0; k < nh; ++k) {
    const double u0 = uh[k], u1 = k + 1 < nh ? uh[k + 1] : 1.0;
    for (int m = 1; m <= count[k]; ++m) {
      const double f = static_cast<double>(m) / (count[k] + 1);
      knots_angles.emplace_back(u0 + f * (u1 - u0), ang[k] + f * (ang[k + 1] - ang[k]));
    }
  }
  std::sort(knots_angles.begin(), knots_angles.end());
  std::vector<std::pair<double, double>> uniq;
  for (const auto& ka : knots_angles)
    if (uniq.empty() || ka.first - uniq.back().first > 1e-9) uniq.push_back(ka);
  while (static_cast<int>(uniq.size()) < cfg.degree + 1) {
    // Tiny hulls: pad with midpoints of the largest gaps.
    std::size_t best = 0;
    double gap = -1.0;
    for (std::size_t i = 0; i < uniq.size(); ++i) {
      const double nxt = i + 1 < uniq.size() ? uniq[i + 1].first : 1.0;
      if (nxt - uniq[i].first > gap) {
        gap = nxt - uniq[i].first;
        best = i;
      }
    }
    const double a1 = best + 1 < uniq.size() ? uniq[best + 1].second : uniq[0].second + 2.0 * M_PI;
    uniq.insert(uniq.begin() + best + 1, {uniq[best].first + 0.5 * gap, 0.5 * (uniq[best].second + a1)});
  }
  const int n = static_cast<int>(uniq.size());
  std::vector<double> knots(n);
  for (int j = 0; j < n; ++j) knots[j] = uniq[j].first - uniq[0].first;

  double rmax = 0.0;
  for (const auto& v : problem.g.vertices()) rmax = std::max(rmax, v.norm());
  double radius = cfg.init_radius_factor * rmax;
  const int offset = (cfg.degree + 1) / 2;  // control point j sits near knot j + offset
  for (int attempt = 0; attempt < 80; ++attempt, radius *= cfg.init_growth) {
    std::vector<Vec2> pts(n);
    for (int j = 0; j < n; ++j) {
      const double a = uniq[(j + offset) % n].second;
      pts[j] = radius * Vec2(std::cos(a), std::sin(a));
    }
    ClosedBSpline2 curve(cfg.degree, std::move(pts), knots);
    if (!curve_is_safe(curve, problem.g)) continue;
    FitState state{curve, {}, cfg.epsilon0_rel * problem.d_bb, CorrespondenceMode::ArcLength, 0};
    state.corr.resize(problem.samples.size());
    for (std::size_t i = 0; i < problem.samples.size(); ++i) state.corr[i].u = problem.sample_arc[i];
    update_correspondences(state, problem, cfg);
    return state;
  }
  throw DegenerateGeometry("could not build an enclosing initial curve");
}

double closest_parameter(const ClosedBSpline2& curve, const Vec2& p, const std::vector<Vec2>& dense) {
  const std::size_t m = dense.size();
  double best = kInf, u = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const Vec2& a = dense[k];
    const Vec2& b = dense[(k + 1) % m];
    const Vec2 e = b - a;
    const double e2 = e.squaredNorm();
    const double s = e2 > 0.0 ? std::clamp((p - a).dot(e) / e2, 0.0, 1.0) : 0.0;
    const double d = (a + s * e - p).squaredNorm();
    if (d < best) {
      best = d;
      u = (static_cast<double>(k) + s) / static_cast<double>(m);
    }
  }
  // Newton refinement on |c(u) - p|^2, keeping only improving steps.
  const double h = 1.0 / static_cast<double>(m);
  double fu = (curve.eval(u) - p).squaredNorm();
  for (int it = 0; it < 12; ++it) {
    const Vec2 c = curve.eval(u), d1 = curve.eval(u, 1), d2 = curve.eval(u, 2);
    const Vec2 r = c - p;
    const double g1 = r.dot(d1);
    double g2 = d1.squaredNorm() + r.dot(d2);
    double step = g2 > 0.0 ? -g1 / g2 : -std::copysign(h, g1);
    step = std::clamp(step, -h, h);
    bool improved = false;
    for (int half = 0; half < 20; ++half, step *= 0.5) {
      const double un = wrap01(u + step);
      const double fn = (curve.eval(un) - p).squaredNorm();
      if (fn < fu) {
        u = un;
        fu = fn;
        improved = true;
        break;
      }
    }
    if (!improved || std::abs(step) < 1e-15) break;
  }
  return u;
}

void compute_visibility(FitState& state, const FitProblem& problem) {
  const int n = static_cast<int>(problem.g.size());
  for (std::size_t i = 0; i < state.corr.size(); ++i) {
    auto& c = state.corr[i];
    const Vec2& v = problem.samples[i];
    c.delta = 1;
    if ((c.foot - v).squaredNorm() == 0.0) continue;
    const int own = problem.sample_edge[i];
    const int prev = problem.sample_at_vertex[i] ? (own - 1 + n) % n : own;
    problem.edges.visit_box(c.foot.cwiseMin(v), c.foot.cwiseMax(v), [&](int e) {
      if (!c.delta || e == own || e == prev) return;
      if (segments_intersect(c.foot, v, problem.edges.start(e), problem.edges.end(e))) c.delta = 0;
    });
  }
}

void update_correspondences(FitState& state, const FitProblem& problem, const FitConfig& cfg) {
  const auto& curve = state.curve;
  std::vector<Vec2> dense;
  if (state.mode == CorrespondenceMode::ClosestPoint) dense = curve.sample(kDenseClosest);
  if (state.corr.size() != problem.samples.size()) state.corr.resize(problem.samples.size());
  for (std::size_t i = 0; i < problem.samples.size(); ++i) {
    auto& c = state.corr[i];
    const Vec2& v = problem.samples[i];
    c.u = state.mode == CorrespondenceMode::ClosestPoint ? closest_parameter(curve, v, dense) : problem.sample_arc[i];
    c.foot = curve.eval(c.u);
    const FrenetFrame f = safe_frenet(curve, c.u);
    c.tangent = f.tangent;
    c.normal = f.normal;
    c.rho = f.radius;
    const Vec2 diff = v - c.foot;
    const double dist = diff.norm();
    c.d = diff.dot(c.normal) >= 0.0 ? dist : -dist;
    c.e_sd = sd_energy(c.foot - v, c.tangent, c.normal, c.d, c.rho);
  }
  compute_visibility(state, problem);
  for (std::size_t i = 0; i < state.corr.size(); ++i) {
    auto& c = state.corr[i];
    const Vec2& v = problem.samples[i];
    const double dist = std::abs(c.d);
    double dt = c.d;
    if (cfg.epsilon_mode == EpsilonMode::Standoff) {
      c.active = c.delta && dist > state.epsilon;
      c.target = c.active ? Vec2(v + state.epsilon * (c.foot - v) / dist) : c.foot;
      dt = c.d >= 0.0 ? dist - state.epsilon : -(dist - state.epsilon);
    } else {
      c.active = c.delta != 0;
      c.target = v;
    }
    c.alpha = (dt < 0.0 && !std::isinf(c.rho)) ? dt / (dt - c.rho) : 0.0;
  }
}

double smoothness_energy(const ClosedBSpline2& curve, const FitConfig& cfg) {
  double e = 0.0;
  for (const auto& q : smooth_quadrature(curve, cfg)) {
    if (cfg.eta0 > 0.0) e += cfg.eta0 * q.w1 * curve.eval(q.u, 1).squaredNorm();
    if (cfg.eta1 > 0.0) e += cfg.eta1 * q.w2 * curve.eval(q.u, 2).squaredNorm();
  }
  return e;
}

EnergyTerms evaluate_energy(const FitState& state, const FitProblem& problem, const FitConfig& cfg) {
  (void)problem;
  EnergyTerms t;
  const double shift = cfg.epsilon_mode == EpsilonMode::Literal ? state.epsilon : 0.0;
  for (const auto& c : state.corr) t.e_error += c.delta * (c.e_sd - shift);
  t.e_smooth = smoothness_energy(state.curve, cfg);
  t.e = t.e_error + cfg.w * t.e_smooth;
  return t;
}

QuadraticModel build_model(const FitState& state, const FitConfig& cfg) {
  const auto& curve = state.curve;
  const int n = static_cast<int>(curve.size());
  QuadraticModel m;
  m.A = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  m.b = Eigen::VectorXd::Zero(2 * n);
  for (const auto& c : state.corr) {
    if (!c.active) continue;
    const BasisSample bs = curve.basis(c.u);
    const Eigen::Matrix2d W = c.alpha * c.tangent * c.tangent.transpose() + c.normal * c.normal.transpose();
    const Vec2 Wt = W * c.target;
    for (int a = 0; a < bs.count; ++a) {
      const int ia = bs.index[a];
      m.b.segment<2>(2 * ia) += bs.d0[a] * Wt;
      for (int b = 0; b < bs.count; ++b) m.A.block<2, 2>(2 * ia, 2 * bs.index[b]) += bs.d0[a] * bs.d0[b] * W;
    }
    m.c += c.target.dot(Wt);
  }
  if (cfg.w > 0.0 && (cfg.eta0 > 0.0 || cfg.eta1 > 0.0)) {
    for (const auto& q : smooth_quadrature(curve, cfg)) {
      const double k1 = cfg.w * cfg.eta0 * q.w1, k2 = cfg.w * cfg.eta1 * q.w2;
      const BasisSample bs = curve.basis(q.u);
      for (int a = 0; a < bs.count; ++a) {
        for (int b = 0; b < bs.count; ++b) {
          const double v = k1 * bs.d1[a] * bs.d1[b] + k2 * bs.d2[a] * bs.d2[b];
          const int ia = 2 * bs.index[a], ib = 2 * bs.index[b];
          m.A(ia, ib) += v;
          m.A(ia + 1, ib + 1) += v;
        }
      }
    }
  }
  return m;
}

std::vector<Vec2> newton_step(const QuadraticModel& model, const Eigen::VectorXd& x) {
  // Minimizer of the model: A y = b; the step is y - x.
  Eigen::LDLT<Eigen::MatrixXd> ldlt(model.A);
  Eigen::VectorXd y;
  bool ok = ldlt.info() == Eigen::Success && ldlt.isPositive() && ldlt.rcond() > 1e-14;
  if (ok) {
    y = ldlt.solve(model.b);
    ok = y.allFinite();
  }
  if (!ok) {
    const double scale = std::max(model.A.diagonal().cwiseAbs().maxCoeff(), 1e-300);
    Eigen::MatrixXd reg = model.A;
    reg.diagonal().array() += 1e-8 * scale;
    y = reg.ldlt().solve(model.b);
    if (!y.allFinite()) y = x;
  }
  return unstack(y - x);
}

std::vector<Vec2> newton_step(const FitState& state, const FitConfig& cfg) {
  return newton_step(build_model(state, cfg), stack(state.curve.control_points()));
}

namespace {

// Refined parameters over the spans supporting control point a.
std::vector<double> support_parameters(const ClosedBSpline2& curve, int a, int per_span, bool& whole) {
  const int p = curve.degree();
  const double lo = curve.knot(a), hi = curve.knot(a + p + 1);
  whole = hi - lo >= 1.0 - 1e-15;
  std::vector<double> out;
  for (int s = a; s <= a + p; ++s) {
    const double t0 = curve.knot(s), t1 = curve.knot(s + 1);
    if (t1 <= t0) continue;
    for (int k = 0; k < per_span; ++k) out.push_back(t0 + (t1 - t0) * k / per_span);
  }
  if (!whole) out.push_back(hi);
  return out;
}

// Parameters of the curve-polygon samples that move with control point a.
std::vector<double> affected_polygon_parameters(const ClosedBSpline2& curve, int a, bool& closed) {
  const int N = kCurvePolygonSamples;
  const int p = curve.degree();
  const double lo = curve.knot(a), hi = curve.knot(a + p + 1);
  long i0 = 0, i1 = N - 1;
  closed = true;
  if (hi - lo < 1.0 - 1e-15) {
    i0 = static_cast<long>(std::ceil(lo * N)) - 1;
    i1 = static_cast<long>(std::floor(hi * N)) + 1;
    closed = i1 - i0 + 1 >= N;
    if (closed) {
      i0 = 0;
      i1 = N - 1;
    }
  }
  std::vector<double> out;
  for (long i = i0; i <= i1; ++i) out.push_back(static_cast<double>(((i % N) + N) % N) / N);
  return out;
}

}  // namespace

double control_point_max_step(const ClosedBSpline2& curve, int a, const Vec2& dir, const FitProblem& problem,
                              const FitConfig& cfg) {
  const double speed = dir.norm();
  if (speed == 0.0) return 0.0;
  const double cap = cfg.ccd_cap_rel * problem.d_bb / speed;

  std::vector<Vec2> pts, vel;
  auto push = [&](double u) {
    const BasisSample bs = curve.basis(u);
    Vec2 c = Vec2::Zero();
    for (int k = 0; k < bs.count; ++k) c += bs.d0[k] * curve.control_points()[bs.index[k]];
    pts.push_back(c);
    vel.push_back(bs.weight(a) * dir);
  };
  bool whole = false;
  for (double u : support_parameters(curve, a, 1 << cfg.ccd_refinement, whole)) push(u);
  if (problem.obstacle.intersects(pts, whole)) return 0.0;
  double t = problem.obstacle.max_step(pts, vel, cap, whole);

  // The polygon that stands in for the curve elsewhere must stay clear too.
  pts.clear();
  vel.clear();
  bool closed = false;
  for (double u : affected_polygon_parameters(curve, a, closed)) push(u);
  t = std::min(t, problem.obstacle.max_step(pts, vel, cap, closed));
  if (t < cap) t *= cfg.ccd_safety;
  return t;
}

std::vector<double> span_error(const FitState& state) {
  const auto& knots = state.curve.knots();
  const std::size_t n = knots.size();
  std::vector<double> sum(n, 0.0), cnt(n, 0.0);
  for (const auto& c : state.corr) {
    const std::size_t j = static_cast<std::size_t>(std::upper_bound(knots.begin(), knots.end(), wrap01(c.u)) - knots.begin()) - 1;
    sum[j] += c.delta * c.e_sd;
    cnt[j] += 1.0;
  }
  for (std::size_t j = 0; j < n; ++j) sum[j] = cnt[j] > 0.0 ? sum[j] / cnt[j] : 0.0;
  return sum;
}

std::vector<double> control_point_error(const FitState& state) {
  const auto& knots = state.curve.knots();
  const int n = static_cast<int>(knots.size());
  const int p = state.curve.degree();
  std::vector<double> sum(n, 0.0), cnt(n, 0.0);
  for (const auto& c : state.corr) {
    const int j = static_cast<int>(std::upper_bound(knots.begin(), knots.end(), wrap01(c.u)) - knots.begin()) - 1;
    sum[j] += c.delta * c.e_sd;
    cnt[j] += 1.0;
  }
  // Control point a is supported on spans a .. a+p.
  std::vector<double> out(n, 0.0);
  for (int a = 0; a < n; ++a) {
    double s = 0.0, k = 0.0;
    for (int q = 0; q <= p && q < n; ++q) {
      s += sum[(a + q) % n];
      k += cnt[(a + q) % n];
    }
    out[a] = k > 0.0 ? s / k : 0.0;
  }
  return out;
}

StepStats apply_step(FitState& state, const std::vector<Vec2>& displacements, const FitProblem& problem,
                     const FitConfig& cfg) {
  const int n = static_cast<int>(state.curve.size());
  if (static_cast<int>(displacements.size()) != n) throw InputError("displacement count differs from control points");
  const QuadraticModel model = build_model(state, cfg);
  Eigen::VectorXd x = stack(state.curve.control_points());
  Eigen::VectorXd grad = model.gradient(x);
  StepStats stats;
  stats.energy_before = model.value(x);
  double energy = stats.energy_before;

  const std::vector<double> err = control_point_error(state);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return err[a] > err[b]; });

  ClosedBSpline2 curve = state.curve;
  for (int a : order) {
    const Vec2& dir = displacements[a];
    if (dir.squaredNorm() == 0.0) continue;
    const double slope = grad.segment<2>(2 * a).dot(dir);
    if (!(slope < 0.0)) continue;
    const double curv = 2.0 * dir.dot(model.A.block<2, 2>(2 * a, 2 * a) * dir);
    const double cap = cfg.ccd_cap_rel * problem.d_bb / dir.norm();
    const double tmax = control_point_max_step(curve, a, dir, problem, cfg);
    if (tmax < cap) ++stats.blocked;
    // Start at the exact 1-D minimizer of the model unless collision caps it.
    double t = 0.5 * tmax;
    if (curv > 0.0) t = std::min(t, -slope / curv);
    bool accepted = false;
    double change = 0.0;
    for (int it = 0; it < 80 && t > 0.0; ++it, t *= cfg.armijo_backtrack) {
      change = t * slope + 0.5 * t * t * curv;
      if (change <= cfg.armijo_c * t * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted || t <= 0.0) continue;
    const Vec2 delta = t * dir;
    auto pts = curve.control_points();
    pts[a] += delta;
    ClosedBSpline2 moved = curve.with_control_points(std::move(pts));
    // Contact times near rounding level can still leave the polygon touching.
    bool closed = false;
    std::vector<Vec2> poly;
    for (double u : affected_polygon_parameters(moved, a, closed)) poly.push_back(moved.eval(u));
    if (problem.obstacle.intersects(poly, closed)) continue;
    poly.clear();
    for (double u : support_parameters(moved, a, 1 << cfg.ccd_refinement, closed)) poly.push_back(moved.eval(u));
    if (problem.obstacle.intersects(poly, closed)) continue;
    x.segment<2>(2 * a) += delta;
    grad += 2.0 * model.A.middleCols<2>(2 * a) * delta;
    energy += change;
    curve = std::move(moved);
    ++stats.moved;
  }
  state.curve = curve;
  stats.energy_after = energy;
  return stats;
}

int add_control_points(FitState& state, const FitProblem& problem, const FitConfig& cfg) {
  const auto& curve = state.curve;
  const int n = static_cast<int>(curve.size());
  if (n >= cfg.n_total || cfg.n_add <= 0) return 0;
  const std::vector<double> err = span_error(state);
  const double l_min = cfg.l_min_rel * problem.d_bb;
  std::vector<std::pair<double, int>> ranked;
  for (int j = 0; j < n; ++j) {
    const double t0 = curve.knot(j), t1 = curve.knot(j + 1);
    if (t1 <= t0 || err[j] <= 0.0) continue;
    double len = 0.0;
    Vec2 prev = curve.eval(t0);
    for (int k = 1; k <= 16; ++k) {
      const Vec2 cur = curve.eval(t0 + (t1 - t0) * k / 16.0);
      len += (cur - prev).norm();
      prev = cur;
    }
    if (len > l_min) ranked.emplace_back(-err[j], j);
  }
  std::sort(ranked.begin(), ranked.end());
  if (static_cast<int>(ranked.size()) > cfg.segments_per_insertion) ranked.resize(cfg.segments_per_insertion);
  if (ranked.empty()) return 0;
  std::vector<double> params;
  for (const auto& [e, j] : ranked) {
    const double t0 = curve.knot(j), t1 = curve.knot(j + 1);
    for (int k = 1; k <= cfg.n_add; ++k) params.push_back(wrap01(t0 + (t1 - t0) * k / (cfg.n_add + 1)));
  }
  ClosedBSpline2 out = curve;
  int added = 0;
  for (double u : params) {
    if (static_cast<int>(out.size()) >= cfg.n_total) break;
    out = out.insert_knot(u);
    ++added;
  }
  state.curve = out;
  return added;
}

bool curve_is_safe(const ClosedBSpline2& curve, const Polygon2& g) {
  const std::vector<Vec2> poly = curve.sample(kCurvePolygonSamples);
  const SegmentGrid grid = SegmentGrid::from_ring(g.vertices());
  if (grid.polyline_hits(poly, true)) return false;
  // The curve itself, refined per knot span.
  std::vector<Vec2> dense;
  for (std::size_t j = 0; j < curve.size(); ++j) {
    const double t0 = curve.knot(static_cast<long>(j)), t1 = curve.knot(static_cast<long>(j) + 1);
    for (int k = 0; k < kSafetySamplesPerSpan; ++k) dense.push_back(curve.eval(t0 + (t1 - t0) * k / kSafetySamplesPerSpan));
  }
  if (grid.polyline_hits(dense, true)) return false;
  const PolygonLocator loc(poly);
  for (const auto& v : g.vertices())
    if (!loc.contains(v)) return false;
  return true;
}

double average_distance(const ClosedBSpline2& curve, const Polygon2& g, int n_samples) {
  const auto& v = g.vertices();
  const std::size_t n = v.size();
  const double total = g.perimeter();
  std::vector<Vec2> sg;
  std::size_t k = 0;
  double acc = 0.0;
  for (int s = 0; s < n_samples; ++s) {
    const double target = total * s / n_samples;
    while (k + 1 < n && acc + (v[(k + 1) % n] - v[k]).norm() <= target) acc += (v[(k + 1) % n] - v[k]).norm(), ++k;
    const Vec2 e = v[(k + 1) % n] - v[k];
    const double len = e.norm();
    sg.push_back(v[k] + (len > 0.0 ? std::clamp((target - acc) / len, 0.0, 1.0) : 0.0) * e);
  }
  const std::vector<Vec2> dense = curve.sample(kDenseClosest);
  double a = 0.0;
  for (const auto& p : sg) a += (curve.eval(closest_parameter(curve, p, dense)) - p).norm();
  const SegmentGrid grid = SegmentGrid::from_ring(v);
  double b = 0.0;
  for (int j = 0; j < n_samples; ++j) b += grid.distance(curve.eval(static_cast<double>(j) / n_samples));
  return a / (2.0 * n_samples) + b / (2.0 * n_samples);
}

FitResult fit(const Polygon2& g_in, const FitConfig& cfg, const std::function<void(const FitState&)>& on_iteration) {
  cfg.validate();
  if (!g_in.is_simple()) throw InputError("contour polygon is not simple");
  const Vec2 centre = g_in.centroid();
  const FitProblem problem(g_in.translated(-centre), cfg);
  FitState state = init_curve(problem, cfg);
  const double ng = static_cast<double>(problem.samples.size());
  const double unit = cfg.contour_unit > 0.0 ? cfg.contour_unit : problem.d_bb / 256.0;
  const double threshold = cfg.error_threshold_coeff * ng * unit * unit;
  const double switch_floor = cfg.correspondence_switch_coeff * ng * problem.d_bb * unit;

  FitResult result{state.curve, 0.0, 0, {}};
  FitState safe = state;
  bool flag = false;
  while (state.iteration < cfg.max_iter) {
    const EnergyTerms before = evaluate_energy(state, problem, cfg);
    if (before.e_error < threshold) break;
    const auto dir = newton_step(state, cfg);
    apply_step(state, dir, problem, cfg);
    update_correspondences(state, problem, cfg);
    const EnergyTerms after = evaluate_energy(state, problem, cfg);
    const double change = std::abs(before.e_error - after.e_error);
    if (flag || (change < cfg.correspondence_switch_rel * std::abs(after.e_error) && after.e_error > switch_floor)) {
      state.mode = CorrespondenceMode::ClosestPoint;
      flag = true;
    }
    add_control_points(state, problem, cfg);
    state.epsilon *= cfg.epsilon_decay;
    ++state.iteration;
    update_correspondences(state, problem, cfg);
    if (!curve_is_safe(state.curve, problem.g)) {
      // Rounding-level contact; keep the last safe curve.
      state = std::move(safe);
      break;
    }
    safe = state;

    const EnergyTerms now = evaluate_energy(state, problem, cfg);
    FitTraceRow row;
    row.iteration = state.iteration;
    row.e = now.e;
    row.e_error = now.e_error;
    row.e_smooth = now.e_smooth;
    row.control_points = static_cast<int>(state.curve.size());
    if (cfg.trace_distance) row.d_avg = average_distance(state.curve, problem.g, cfg.n_samples);
    int hidden = 0;
    for (const auto& c : state.corr) hidden += c.delta == 0;
    row.hidden_fraction = static_cast<double>(hidden) / ng;
    row.closest_mode = state.mode == CorrespondenceMode::ClosestPoint;
    result.trace.push_back(row);
    if (on_iteration) on_iteration(state);
  }
  result.iterations = state.iteration;
  result.d_avg = average_distance(state.curve, problem.g, cfg.n_samples);
  result.curve = state.curve.translated(centre);
  return result;
}

}  // namespace hotwire
