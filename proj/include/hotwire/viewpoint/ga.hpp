#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hotwire/geom/mesh.hpp"
#include "hotwire/projection/raster.hpp"
#include "hotwire/viewpoint/candidates.hpp"

namespace hotwire {

class MaterialState;

struct GAConfig {
  int n_pop = 30;
  double p_uni = 0.30;
  double p_geo = 0.40;
  double p_nei = 0.30;
  double p_father = 0.5;
  double p_glo = 0.05;
  double p_loc = 0.10;
  double t_slerp = 0.5;
  int n_max = 15;
  int n_converge = 5;
  int dedup_retries = 50;
  std::uint64_t seed = 1;

  void validate() const;
};

struct Individual {
  int index = 0;
  double fitness = -1.0;  // negative: not evaluated
};

struct Population {
  std::vector<Individual> individuals;
  int generation = 0;
};

/// Memoizing wrapper that counts distinct evaluations.
class FitnessCache {
 public:
  explicit FitnessCache(std::function<double(int)> fn) : fn_(std::move(fn)) {}
  double operator()(int index);
  std::size_t evaluations() const { return values_.size(); }

 private:
  std::function<double(int)> fn_;
  std::unordered_map<int, double> values_;
};

/// Area mismatch between the material and mesh silhouettes from `v`.
struct FitnessOptions {
  int resolution = 256;
  int depth_samples = 256;
  double frame_scale = kFrameScale;
};

double evaluate_fitness(const Viewpoint& v, const MaterialState& material, const TriMesh& mesh,
                        const FitnessOptions& opt = {});

/// Pairs of population positions drawn by fitness-proportional roulette.
std::vector<std::pair<int, int>> roulette_select_parents(const Population& pop, std::mt19937_64& rng,
                                                         int retries = 50);

/// Spherical linear interpolation of two unit vectors.
Vec3 slerp(const Vec3& a, const Vec3& b, double t);

enum class CrossoverKind { Uniform, Midpoint, Neighbourhood };

int crossover(int father, int mother, const CandidateSet& set, const GAConfig& cfg, std::mt19937_64& rng,
              CrossoverKind* used = nullptr);
int crossover_uniform(int father, int mother, double p_father, std::mt19937_64& rng);
/// Returns -1 for antipodal parents.
int crossover_midpoint(int father, int mother, const CandidateSet& set, double t);
int crossover_neighbourhood(int father, int mother, const CandidateSet& set, std::mt19937_64& rng);

int mutate(int child, const CandidateSet& set, const GAConfig& cfg, std::mt19937_64& rng);

Population elitist_select(const Population& old, const std::vector<Individual>& children, int n_pop);

struct GAResult {
  int best = 0;
  Viewpoint viewpoint;
  double fitness = 0.0;
  int generations = 0;
  std::size_t evaluations = 0;
  std::vector<double> best_per_generation;  // index 0: initial population
};

GAResult run_ga(const CandidateSet& set, FitnessCache& fitness, const GAConfig& cfg);
GAResult run_ga(const CandidateSet& set, const MaterialState& material, const TriMesh& mesh, const GAConfig& cfg,
                const FitnessOptions& opt = {});

}  // namespace hotwire
