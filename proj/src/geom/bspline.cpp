#include "hotwire/geom/bspline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hotwire {

double BasisSample::weight(int control, int order) const {
  double w = 0.0;
  for (int a = 0; a < count; ++a) {
    if (index[a] != control) continue;
    w += order == 0 ? d0[a] : order == 1 ? d1[a] : d2[a];
  }
  return w;
}

bool FrenetFrame::flat() const { return std::isinf(radius); }

ClosedBSpline2::ClosedBSpline2(int degree, std::vector<Vec2> control_points, std::vector<double> knots)
    : degree_(degree), points_(std::move(control_points)), knots_(std::move(knots)) {
  if (degree_ < 1 || degree_ > kMaxDegree) throw InputError("unsupported B-spline degree");
  if (points_.size() < static_cast<std::size_t>(degree_) + 1)
    throw DegenerateGeometry("closed B-spline needs at least degree+1 control points");
  if (knots_.size() != points_.size()) throw InputError("periodic knot vector must have one knot per control point");
  if (knots_.front() != 0.0) throw InputError("first knot must be 0");
  int run = 1;
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (!(knots_[i] >= 0.0 && knots_[i] < 1.0)) throw InputError("knots must lie in [0, 1)");
    if (i > 0) {
      if (knots_[i] < knots_[i - 1]) throw InputError("knots must be nondecreasing");
      run = knots_[i] == knots_[i - 1] ? run + 1 : 1;
      if (run > degree_) throw InputError("knot multiplicity exceeds degree");
    }
  }
}

ClosedBSpline2 ClosedBSpline2::uniform(int degree, std::vector<Vec2> control_points) {
  const std::size_t n = control_points.size();
  std::vector<double> knots(n);
  for (std::size_t i = 0; i < n; ++i) knots[i] = static_cast<double>(i) / static_cast<double>(n);
  return ClosedBSpline2(degree, std::move(control_points), std::move(knots));
}

double ClosedBSpline2::knot(long j) const {
  const long n = static_cast<long>(knots_.size());
  long q = j / n;
  long r = j % n;
  if (r < 0) {
    r += n;
    q -= 1;
  }
  return knots_[static_cast<std::size_t>(r)] + static_cast<double>(q);
}

namespace {

double wrap_unit(double u) {
  double w = u - std::floor(u);
  if (w >= 1.0) w = 0.0;
  return w;
}

}  // namespace

BasisSample ClosedBSpline2::basis(double u_in) const {
  const int p = degree_;
  const long n = static_cast<long>(knots_.size());
  const double u = wrap_unit(u_in);
  const long span = static_cast<long>(std::upper_bound(knots_.begin(), knots_.end(), u) - knots_.begin()) - 1;

  // Derivatives of the nonzero basis functions (Piegl & Tiller A2.3) on the
  // periodically extended knot sequence.
  double ndu[kMaxDegree + 1][kMaxDegree + 1];
  double left[kMaxDegree + 1];
  double right[kMaxDegree + 1];
  ndu[0][0] = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = u - knot(span + 1 - j);
    right[j] = knot(span + j) - u;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      ndu[j][r] = right[r + 1] + left[j - r];
      const double temp = ndu[r][j - 1] / ndu[j][r];
      ndu[r][j] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    ndu[j][j] = saved;
  }

  constexpr int kOrders = 2;
  double ders[kOrders + 1][kMaxDegree + 1] = {};
  for (int j = 0; j <= p; ++j) ders[0][j] = ndu[j][p];
  double a[2][kMaxDegree + 1];
  for (int r = 0; r <= p; ++r) {
    int s1 = 0;
    int s2 = 1;
    a[0][0] = 1.0;
    for (int k = 1; k <= kOrders; ++k) {
      double d = 0.0;
      const int rk = r - k;
      const int pk = p - k;
      if (pk < 0) break;
      if (r >= k) {
        a[s2][0] = a[s1][0] / ndu[pk + 1][rk];
        d = a[s2][0] * ndu[rk][pk];
      }
      const int j1 = rk >= -1 ? 1 : -rk;
      const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
      for (int j = j1; j <= j2; ++j) {
        a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][rk + j];
        d += a[s2][j] * ndu[rk + j][pk];
      }
      if (r <= pk) {
        a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
        d += a[s2][k] * ndu[r][pk];
      }
      ders[k][r] = d;
      std::swap(s1, s2);
    }
  }
  double factor = p;
  for (int k = 1; k <= kOrders; ++k) {
    for (int j = 0; j <= p; ++j) ders[k][j] *= factor;
    factor *= (p - k);
  }

  BasisSample out;
  out.span = static_cast<int>(span);
  out.count = p + 1;
  for (int j = 0; j <= p; ++j) {
    long idx = (span - p + j) % n;
    if (idx < 0) idx += n;
    out.index[j] = static_cast<int>(idx);
    out.d0[j] = ders[0][j];
    out.d1[j] = ders[1][j];
    out.d2[j] = ders[2][j];
  }
  return out;
}

Vec2 ClosedBSpline2::eval(double u, int order) const {
  if (order < 0 || order > 2) throw InputError("B-spline evaluation order must be 0, 1 or 2");
  const BasisSample b = basis(u);
  const auto& w = order == 0 ? b.d0 : order == 1 ? b.d1 : b.d2;
  Vec2 out = Vec2::Zero();
  for (int a = 0; a < b.count; ++a) out += w[a] * points_[b.index[a]];
  return out;
}

FrenetFrame ClosedBSpline2::frenet(double u) const {
  const BasisSample b = basis(u);
  Vec2 d1 = Vec2::Zero();
  Vec2 d2 = Vec2::Zero();
  for (int a = 0; a < b.count; ++a) {
    d1 += b.d1[a] * points_[b.index[a]];
    d2 += b.d2[a] * points_[b.index[a]];
  }
  const double speed = d1.norm();
  if (!(speed > 0.0)) throw DegenerateGeometry("singular curve parameter: zero first derivative");
  FrenetFrame f;
  f.tangent = d1 / speed;
  const double k = cross2(d1, d2);
  if (std::abs(k) <= 1e-12 * speed * d2.norm() || k == 0.0) {
    f.normal = perp(f.tangent);
    f.radius = std::numeric_limits<double>::infinity();
    return f;
  }
  f.normal = k > 0.0 ? perp(f.tangent) : Vec2(-perp(f.tangent));
  f.radius = speed * speed * speed / std::abs(k);
  return f;
}

ClosedBSpline2 ClosedBSpline2::insert_knot(double u_in) const {
  const int p = degree_;
  const long n = static_cast<long>(points_.size());
  const double u = wrap_unit(u_in);
  const long mult = std::count(knots_.begin(), knots_.end(), u);
  if (mult + 1 > p) throw InputError("knot insertion would exceed multiplicity limit");
  const long k = static_cast<long>(std::upper_bound(knots_.begin(), knots_.end(), u) - knots_.begin()) - 1;

  auto P = [&](long i) -> const Vec2& {
    long r = i % n;
    if (r < 0) r += n;
    return points_[static_cast<std::size_t>(r)];
  };
  const long m = n + 1;
  std::vector<Vec2> q(static_cast<std::size_t>(m));
  auto put = [&](long i, const Vec2& v) {
    long r = i % m;
    if (r < 0) r += m;
    q[static_cast<std::size_t>(r)] = v;
  };
  for (long i = k - p + 1; i <= k; ++i) {
    const double denom = knot(i + p) - knot(i);
    const double alpha = denom > 0.0 ? (u - knot(i)) / denom : 0.0;
    put(i, alpha * P(i) + (1.0 - alpha) * P(i - 1));
  }
  for (long i = k + 1; i <= k - p + 1 + n; ++i) put(i, P(i - 1));

  std::vector<double> knots = knots_;
  knots.insert(knots.begin() + (k + 1), u);
  return ClosedBSpline2(p, std::move(q), std::move(knots));
}

ClosedBSpline2 ClosedBSpline2::with_control_points(std::vector<Vec2> control_points) const {
  return ClosedBSpline2(degree_, std::move(control_points), knots_);
}

ClosedBSpline2 ClosedBSpline2::translated(const Vec2& offset) const {
  std::vector<Vec2> moved = points_;
  for (auto& p : moved) p += offset;
  return with_control_points(std::move(moved));
}

std::vector<Vec2> ClosedBSpline2::sample(std::size_t n) const {
  std::vector<Vec2> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = eval(static_cast<double>(i) / static_cast<double>(n));
  return out;
}

std::pair<double, double> ClosedBSpline2::support(int control) const {
  return {knot(control), knot(control + degree_ + 1)};
}

}  // namespace hotwire
