#include "hotwire/viewpoint/candidates.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hotwire {

double CandidateSet::angle(int a, int b) const {
  return std::acos(std::clamp(directions[a].dot(directions[b]), -1.0, 1.0));
}

int CandidateSet::nearest(const Vec3& dir) const {
  const Vec3 d = dir.normalized();
  int best = 0;
  double best_dot = -2.0;
  for (std::size_t i = 0; i < directions.size(); ++i) {
    const double c = directions[i].dot(d);
    if (c > best_dot) {
      best_dot = c;
      best = static_cast<int>(i);
    }
  }
  return best;
}

Viewpoint viewpoint_from_direction(const Vec3& dir, double r) {
  const Vec3 d = dir.normalized();
  Viewpoint v;
  v.phi = std::asin(std::clamp(d.z(), -1.0, 1.0));
  v.theta = std::atan2(d.y(), d.x());
  if (v.theta < 0.0) v.theta += 2.0 * M_PI;
  if (v.theta >= 2.0 * M_PI) v.theta = 0.0;
  v.r = r;
  return v;
}

CandidateSet make_candidate_set(std::vector<Viewpoint> viewpoints, int k) {
  CandidateSet set;
  set.viewpoints = std::move(viewpoints);
  const int n = static_cast<int>(set.viewpoints.size());
  set.directions.reserve(n);
  for (const auto& v : set.viewpoints) set.directions.push_back(v.direction());
  const int kk = std::min(k, n - 1);
  set.knn.assign(n, {});
  std::vector<std::pair<double, int>> buf(n > 0 ? n - 1 : 0);
  for (int i = 0; i < n; ++i) {
    int m = 0;
    for (int j = 0; j < n; ++j)
      if (j != i) buf[m++] = {-set.directions[i].dot(set.directions[j]), j};
    if (kk <= 0) continue;
    std::partial_sort(buf.begin(), buf.begin() + kk, buf.end());
    for (int a = 0; a < kk; ++a) set.knn[i].push_back(buf[a].second);
  }
  return set;
}

CandidateSet fibonacci_sample(int n, double r, int k) {
  if (n < 1) throw InputError("candidate count must be at least 1");
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  std::vector<Viewpoint> v(n);
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    v[i].phi = std::asin(z);
    v[i].theta = std::fmod(golden * i, 2.0 * M_PI);
    v[i].r = r;
  }
  return make_candidate_set(std::move(v), k);
}

std::vector<int> upper_hemisphere(const CandidateSet& set) {
  std::vector<int> out;
  for (std::size_t i = 0; i < set.size(); ++i)
    if (set.viewpoints[i].phi >= 0.0) out.push_back(static_cast<int>(i));
  return out;
}

CandidateSet subset(const CandidateSet& set, const std::vector<int>& indices, int k) {
  std::vector<Viewpoint> v;
  v.reserve(indices.size());
  for (int i : indices) v.push_back(set.viewpoints.at(i));
  return make_candidate_set(std::move(v), k);
}

std::vector<int> farthest_point_init(const CandidateSet& set, int n_pop, std::mt19937_64& rng) {
  const int n = static_cast<int>(set.size());
  if (n_pop > n) throw InputError("population larger than candidate set");
  if (n_pop <= 0) return {};
  std::vector<int> chosen;
  chosen.push_back(static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(rng)));
  // Largest dot product to any chosen point, i.e. the smallest angle.
  std::vector<double> closest(n, -2.0);
  while (static_cast<int>(chosen.size()) < n_pop) {
    const Vec3& last = set.directions[chosen.back()];
    for (int i = 0; i < n; ++i) closest[i] = std::max(closest[i], set.directions[i].dot(last));
    for (int c : chosen) closest[c] = 3.0;
    chosen.push_back(static_cast<int>(std::min_element(closest.begin(), closest.end()) - closest.begin()));
  }
  return chosen;
}

}  // namespace hotwire
