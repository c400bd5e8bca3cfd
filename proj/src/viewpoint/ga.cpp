#include "hotwire/viewpoint/ga.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "hotwire/material/material.hpp"

namespace hotwire {

void GAConfig::validate() const {
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!prob(p_uni) || !prob(p_geo) || !prob(p_nei) || !prob(p_father) || !prob(p_glo) || !prob(p_loc))
    throw InputError("GA probabilities must lie in [0, 1]");
  if (std::abs(p_uni + p_geo + p_nei - 1.0) > 1e-9) throw InputError("crossover probabilities must sum to 1");
  if (p_glo + p_loc > 1.0 + 1e-12) throw InputError("mutation probabilities exceed 1");
  if (n_pop < 1 || n_max < 1 || n_converge < 1) throw InputError("GA counts must be positive");
}

double FitnessCache::operator()(int index) {
  auto it = values_.find(index);
  if (it != values_.end()) return it->second;
  const double f = fn_(index);
  values_.emplace(index, f);
  return f;
}

double evaluate_fitness(const Viewpoint& v, const MaterialState& material, const TriMesh& mesh,
                        const FitnessOptions& opt) {
  const CameraFrame frame = camera_frame(v, opt.frame_scale);
  return static_cast<double>(area_mismatch(rasterize_material_area(material, frame, opt.resolution, opt.depth_samples),
                                           rasterize_mesh_area(mesh, frame, opt.resolution)));
}

std::vector<std::pair<int, int>> roulette_select_parents(const Population& pop, std::mt19937_64& rng, int retries) {
  const int n = static_cast<int>(pop.individuals.size());
  if (n == 0) return {};
  std::vector<double> w(n);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    if (pop.individuals[i].fitness < 0.0) throw InvalidState("roulette selection needs evaluated fitness");
    w[i] = pop.individuals[i].fitness;
    total += w[i];
  }
  if (!(total > 0.0)) std::fill(w.begin(), w.end(), 1.0);
  std::discrete_distribution<int> pick(w.begin(), w.end());
  std::set<std::pair<int, int>> used;
  std::vector<std::pair<int, int>> pairs;
  const int n_pairs = std::max(1, n / 2);
  for (int p = 0; p < n_pairs; ++p) {
    std::pair<int, int> pair;
    for (int attempt = 0;; ++attempt) {
      pair = {pick(rng), pick(rng)};
      const int a = pop.individuals[pair.first].index, b = pop.individuals[pair.second].index;
      const auto key = std::minmax(a, b);
      if ((a != b && !used.count(key)) || attempt >= retries) {
        used.insert(key);
        break;
      }
    }
    pairs.push_back(pair);
  }
  return pairs;
}

Vec3 slerp(const Vec3& a, const Vec3& b, double t) {
  const double c = std::clamp(a.dot(b), -1.0, 1.0);
  const double omega = std::acos(c);
  const double s = std::sin(omega);
  if (s < 1e-12) return a;
  return (std::sin((1.0 - t) * omega) / s) * a + (std::sin(t * omega) / s) * b;
}

int crossover_uniform(int father, int mother, double p_father, std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p_father ? father : mother;
}

int crossover_midpoint(int father, int mother, const CandidateSet& set, double t) {
  const Vec3& a = set.directions[father];
  const Vec3& b = set.directions[mother];
  if (a.dot(b) < -1.0 + 1e-12) return -1;
  return set.nearest(slerp(a, b, t));
}

int crossover_neighbourhood(int father, int mother, const CandidateSet& set, std::mt19937_64& rng) {
  std::vector<int> pool = set.knn[father];
  for (int j : set.knn[mother])
    if (std::find(pool.begin(), pool.end(), j) == pool.end()) pool.push_back(j);
  if (pool.empty()) return father;
  return pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
}

int crossover(int father, int mother, const CandidateSet& set, const GAConfig& cfg, std::mt19937_64& rng,
              CrossoverKind* used) {
  const double x = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  CrossoverKind kind = x < cfg.p_uni ? CrossoverKind::Uniform
                       : x < cfg.p_uni + cfg.p_geo ? CrossoverKind::Midpoint
                                                   : CrossoverKind::Neighbourhood;
  int child = -1;
  if (kind == CrossoverKind::Uniform) child = crossover_uniform(father, mother, cfg.p_father, rng);
  if (kind == CrossoverKind::Midpoint) {
    child = crossover_midpoint(father, mother, set, cfg.t_slerp);
    if (child < 0) kind = CrossoverKind::Neighbourhood;
  }
  if (kind == CrossoverKind::Neighbourhood) child = crossover_neighbourhood(father, mother, set, rng);
  if (used) *used = kind;
  return child;
}

int mutate(int child, const CandidateSet& set, const GAConfig& cfg, std::mt19937_64& rng) {
  const double x = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  if (x < cfg.p_glo) return std::uniform_int_distribution<int>(0, static_cast<int>(set.size()) - 1)(rng);
  if (x < cfg.p_glo + cfg.p_loc) {
    const auto& nb = set.knn[child];
    if (nb.empty()) return child;
    return nb[std::uniform_int_distribution<std::size_t>(0, nb.size() - 1)(rng)];
  }
  return child;
}

Population elitist_select(const Population& old, const std::vector<Individual>& children, int n_pop) {
  std::vector<Individual> all = old.individuals;
  all.insert(all.end(), children.begin(), children.end());
  std::sort(all.begin(), all.end(), [](const Individual& a, const Individual& b) {
    return a.fitness != b.fitness ? a.fitness > b.fitness : a.index < b.index;
  });
  Population next;
  next.generation = old.generation + 1;
  std::set<int> seen;
  for (const auto& ind : all) {
    if (static_cast<int>(next.individuals.size()) == n_pop) break;
    if (seen.insert(ind.index).second) next.individuals.push_back(ind);
  }
  // Not enough distinct individuals: pad with copies of the best.
  while (!all.empty() && static_cast<int>(next.individuals.size()) < n_pop) next.individuals.push_back(all.front());
  return next;
}

namespace {

double best_of(const Population& p) {
  double b = -1.0;
  for (const auto& i : p.individuals) b = std::max(b, i.fitness);
  return b;
}

std::vector<int> index_set(const Population& p) {
  std::vector<int> s;
  for (const auto& i : p.individuals) s.push_back(i.index);
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace

GAResult run_ga(const CandidateSet& set, FitnessCache& fitness, const GAConfig& cfg) {
  cfg.validate();
  if (set.size() == 0) throw InputError("empty candidate set");
  std::mt19937_64 rng(cfg.seed);
  const int n_pop = std::min<int>(cfg.n_pop, static_cast<int>(set.size()));
  Population pop;
  for (int idx : farthest_point_init(set, n_pop, rng)) pop.individuals.push_back({idx, fitness(idx)});

  GAResult result;
  result.best_per_generation.push_back(best_of(pop));
  int unchanged = 0;
  int generation = 0;
  while (generation < cfg.n_max && unchanged < cfg.n_converge && set.size() > 1) {
    const auto pairs = roulette_select_parents(pop, rng, cfg.dedup_retries);
    std::vector<Individual> children;
    for (const auto& [f, m] : pairs) {
      int child = crossover(pop.individuals[f].index, pop.individuals[m].index, set, cfg, rng);
      child = mutate(child, set, cfg, rng);
      children.push_back({child, fitness(child)});
    }
    Population next = elitist_select(pop, children, n_pop);
    unchanged = index_set(next) == index_set(pop) ? unchanged + 1 : 0;
    pop = std::move(next);
    ++generation;
    result.best_per_generation.push_back(best_of(pop));
  }
  const auto best = std::max_element(pop.individuals.begin(), pop.individuals.end(), [](const auto& a, const auto& b) {
    return a.fitness != b.fitness ? a.fitness < b.fitness : a.index > b.index;
  });
  result.best = best->index;
  result.fitness = best->fitness;
  result.viewpoint = set.viewpoints[best->index];
  result.generations = std::max(generation, 1);
  result.evaluations = fitness.evaluations();
  return result;
}

GAResult run_ga(const CandidateSet& set, const MaterialState& material, const TriMesh& mesh, const GAConfig& cfg,
                const FitnessOptions& opt) {
  FitnessCache cache([&](int i) { return evaluate_fitness(set.viewpoints[i], material, mesh, opt); });
  return run_ga(set, cache, cfg);
}

}  // namespace hotwire
