#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "hotwire/material/material.hpp"
#include "hotwire/viewpoint/candidates.hpp"
#include "hotwire/viewpoint/ga.hpp"
#include "support/shapes.hpp"

using namespace hotwire;

namespace {

double angle(const Vec3& a, const Vec3& b) { return std::acos(std::clamp(a.dot(b), -1.0, 1.0)); }

// Brute-force nearest neighbours by angle, ties broken by index.
std::vector<int> brute_knn(const CandidateSet& s, int i, int k) {
  std::vector<int> idx;
  for (int j = 0; j < static_cast<int>(s.size()); ++j)
    if (j != i) idx.push_back(j);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    return angle(s.directions[i], s.directions[a]) < angle(s.directions[i], s.directions[b]);
  });
  idx.resize(k);
  return idx;
}

// Smooth fitness with one broad peak and a weaker secondary bump.
double landscape(const Vec3& d) {
  const Vec3 peak = Vec3(0.3, -0.5, 0.8).normalized();
  const Vec3 bump = Vec3(-0.7, 0.6, -0.2).normalized();
  return 1.0 + std::exp(-4.0 * (1.0 - d.dot(peak))) + 0.6 * std::exp(-6.0 * (1.0 - d.dot(bump)));
}

}  // namespace

TEST_CASE("fibonacci lattice covers the sphere evenly") {
  const CandidateSet s = fibonacci_sample(2000);
  REQUIRE(s.size() == 2000);
  double mean_z = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(s.directions[i].norm() == doctest::Approx(1.0));
    CHECK(s.viewpoints[i].r == 2.0);
    CHECK((s.directions[i] - camera_frame(s.viewpoints[i]).position / 2.0).norm() < 1e-12);
    mean_z += s.directions[i].z();
  }
  CHECK(std::abs(mean_z / 2000) < 1e-3);
  // Nearest-neighbour spacing stays within a small factor of the ideal.
  const double ideal = std::sqrt(4.0 * M_PI / 2000);
  for (std::size_t i = 0; i < s.size(); i += 37) {
    const double nn = s.angle(static_cast<int>(i), s.knn[i][0]);
    CHECK(nn > 0.5 * ideal);
    CHECK(nn < 1.5 * ideal);
  }
  CHECK_THROWS_AS(fibonacci_sample(0), InputError);
}

TEST_CASE("neighbour lists match brute force") {
  const CandidateSet s = fibonacci_sample(300);
  for (int i = 0; i < 300; i += 7) {
    REQUIRE(s.knn[i].size() == kNeighbours);
    const auto ref = brute_knn(s, i, kNeighbours);
    // Compare angles, not indices, so equal-distance ties do not matter.
    for (int k = 0; k < kNeighbours; ++k)
      CHECK(s.angle(i, s.knn[i][k]) == doctest::Approx(angle(s.directions[i], s.directions[ref[k]])));
  }
}

TEST_CASE("nearest candidate matches brute force") {
  const CandidateSet s = fibonacci_sample(500);
  std::mt19937_64 rng(21);
  std::normal_distribution<double> N;
  for (int t = 0; t < 200; ++t) {
    const Vec3 d = Vec3(N(rng), N(rng), N(rng)).normalized();
    int best = 0;
    for (int j = 1; j < 500; ++j)
      if (d.dot(s.directions[j]) > d.dot(s.directions[best])) best = j;
    CHECK(angle(d, s.directions[s.nearest(d)]) == doctest::Approx(angle(d, s.directions[best])));
  }
}

TEST_CASE("hemisphere subset keeps upper viewpoints") {
  const CandidateSet s = fibonacci_sample(400);
  const auto up = upper_hemisphere(s);
  CHECK(up.size() == doctest::Approx(200).epsilon(0.02));
  const CandidateSet h = subset(s, up);
  for (std::size_t i = 0; i < h.size(); ++i) {
    CHECK(h.viewpoints[i].phi >= 0.0);
    for (int j : h.knn[i]) CHECK((j >= 0 && j < static_cast<int>(h.size())));
  }
}

TEST_CASE("slerp stays on the sphere and bisects the arc") {
  std::mt19937_64 rng(22);
  std::normal_distribution<double> N;
  for (int t = 0; t < 100; ++t) {
    const Vec3 a = Vec3(N(rng), N(rng), N(rng)).normalized();
    const Vec3 b = Vec3(N(rng), N(rng), N(rng)).normalized();
    const Vec3 m = slerp(a, b, 0.5);
    CHECK(m.norm() == doctest::Approx(1.0));
    CHECK(angle(a, m) == doctest::Approx(angle(m, b)));
    CHECK(angle(a, m) == doctest::Approx(0.5 * angle(a, b)));
    CHECK((slerp(a, b, 0.0) - a).norm() < 1e-12);
    CHECK((slerp(a, b, 1.0) - b).norm() < 1e-12);
  }
}

TEST_CASE("crossover operators") {
  const CandidateSet s = fibonacci_sample(500);
  std::mt19937_64 rng(23);
  int father_count = 0;
  for (int t = 0; t < 4000; ++t) {
    const int c = crossover_uniform(3, 7, 0.5, rng);
    CHECK((c == 3 || c == 7));
    father_count += c == 3;
  }
  CHECK(father_count == doctest::Approx(2000).epsilon(0.06));

  for (int t = 0; t < 50; ++t) {
    const int a = t * 9, b = (t * 9 + 200) % 500;
    const int m = crossover_midpoint(a, b, s, 0.5);
    CHECK(m == s.nearest(slerp(s.directions[a], s.directions[b], 0.5)));
    const int n = crossover_neighbourhood(a, b, s, rng);
    const bool in_pool = std::count(s.knn[a].begin(), s.knn[a].end(), n) + std::count(s.knn[b].begin(), s.knn[b].end(), n);
    CHECK(in_pool);
  }
  // Antipodal parents have no defined midpoint.
  const CandidateSet pair = make_candidate_set({{0.0, 0.0, 2.0}, {0.0, M_PI, 2.0}, {M_PI / 2, 0.0, 2.0}}, 2);
  CHECK(crossover_midpoint(0, 1, pair, 0.5) == -1);

  GAConfig cfg;
  int counts[3] = {0, 0, 0};
  for (int t = 0; t < 6000; ++t) {
    CrossoverKind k;
    crossover(10, 300, s, cfg, rng, &k);
    counts[static_cast<int>(k)]++;
  }
  CHECK(counts[0] / 6000.0 == doctest::Approx(0.3).epsilon(0.1));
  CHECK(counts[1] / 6000.0 == doctest::Approx(0.4).epsilon(0.1));
  CHECK(counts[2] / 6000.0 == doctest::Approx(0.3).epsilon(0.1));
}

TEST_CASE("mutation rates") {
  const CandidateSet s = fibonacci_sample(500);
  GAConfig cfg;
  std::mt19937_64 rng(24);
  int same = 0, local = 0;
  for (int t = 0; t < 10000; ++t) {
    const int m = mutate(42, s, cfg, rng);
    CHECK((m >= 0 && m < 500));
    if (m == 42) ++same;
    else if (std::count(s.knn[42].begin(), s.knn[42].end(), m)) ++local;
  }
  CHECK(same / 10000.0 == doctest::Approx(0.85).epsilon(0.03));
  CHECK(local / 10000.0 == doctest::Approx(0.10).epsilon(0.15));
}

TEST_CASE("farthest point init spreads distinct individuals") {
  const CandidateSet s = fibonacci_sample(1000);
  std::mt19937_64 rng(25);
  const auto init = farthest_point_init(s, 30, rng);
  REQUIRE(init.size() == 30);
  CHECK(std::set<int>(init.begin(), init.end()).size() == 30);
  double min_sep = 10.0;
  for (std::size_t i = 0; i < init.size(); ++i)
    for (std::size_t j = i + 1; j < init.size(); ++j) min_sep = std::min(min_sep, s.angle(init[i], init[j]));
  // 30 caps of this radius cannot tile much less than the sphere.
  CHECK(min_sep > 0.3);
}

TEST_CASE("roulette selection favours fit individuals") {
  Population pop;
  for (int i = 0; i < 10; ++i) pop.individuals.push_back({i, i == 9 ? 10.0 : 1.0});
  std::mt19937_64 rng(26);
  int with_best = 0, total = 0;
  for (int t = 0; t < 500; ++t)
    for (const auto& [a, b] : roulette_select_parents(pop, rng)) {
      with_best += (a == 9) + (b == 9);
      total += 2;
    }
  // Self-pairs are rejected, so the best fills at most half the slots; uniform
  // selection would give it 0.1.
  CHECK(with_best / double(total) > 0.3);
  CHECK(with_best / double(total) <= 0.5);
  pop.individuals[0].fitness = -1.0;
  CHECK_THROWS_AS(roulette_select_parents(pop, rng), InvalidState);
}

TEST_CASE("elitist selection keeps the best distinct individuals") {
  Population old;
  for (int i = 0; i < 5; ++i) old.individuals.push_back({i, double(i)});
  const std::vector<Individual> kids = {{10, 2.5}, {11, 7.0}, {4, 4.0}};
  const Population next = elitist_select(old, kids, 5);
  REQUIRE(next.individuals.size() == 5);
  CHECK(next.generation == 1);
  std::vector<int> idx;
  for (const auto& i : next.individuals) idx.push_back(i.index);
  CHECK(idx == std::vector<int>{11, 4, 3, 10, 2});
}

TEST_CASE("GA on a synthetic landscape") {
  const CandidateSet s = fibonacci_sample(2000);
  double best_value = 0.0;
  for (const auto& d : s.directions) best_value = std::max(best_value, landscape(d));
  int good = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    FitnessCache cache([&](int i) { return landscape(s.directions[i]); });
    GAConfig cfg;
    cfg.seed = seed;
    const GAResult r = run_ga(s, cache, cfg);
    CHECK(r.evaluations == cache.evaluations());
    CHECK(r.evaluations < s.size());
    CHECK(r.fitness == landscape(s.directions[r.best]));
    CHECK(r.generations <= cfg.n_max);
    for (std::size_t g = 1; g < r.best_per_generation.size(); ++g)
      CHECK(r.best_per_generation[g] >= r.best_per_generation[g - 1]);
    good += r.fitness >= 0.95 * best_value;
  }
  CHECK(good >= 19);
}

TEST_CASE("GA is deterministic for a seed") {
  const CandidateSet s = fibonacci_sample(500);
  auto once = [&] {
    FitnessCache cache([&](int i) { return landscape(s.directions[i]); });
    GAConfig cfg;
    cfg.seed = 7;
    return run_ga(s, cache, cfg);
  };
  const GAResult a = once(), b = once();
  CHECK(a.best == b.best);
  CHECK(a.evaluations == b.evaluations);
  CHECK(a.best_per_generation == b.best_per_generation);
}

TEST_CASE("fitness is the silhouette area mismatch") {
  const TriMesh ball = test::icosphere(0.35, 4);
  const MaterialState m;
  FitnessOptions opt;
  opt.resolution = 128;
  const Viewpoint v{0.2, 0.7, 2.0};
  const CameraFrame f = camera_frame(v);
  const double px = 2.0 * f.scale / opt.resolution;
  // Unit square minus a disc, in pixels; the square's projection depends on v.
  const double stock = rasterize_material_area(m, f, opt.resolution).count();
  const double expect = stock - M_PI * 0.35 * 0.35 / (px * px);
  CHECK(evaluate_fitness(v, m, ball, opt) == doctest::Approx(expect).epsilon(0.01));
  // Fitness shrinks once a cut removes the excess.
  const MaterialState cut = m.with_cut(PrismCut(f, test::circle_spline(128, 0.37)));
  CHECK(evaluate_fitness(v, cut, ball, opt) < 0.1 * expect);
}
