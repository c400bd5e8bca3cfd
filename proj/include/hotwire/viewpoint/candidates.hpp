#pragma once

#include <random>
#include <vector>

#include "hotwire/projection/camera.hpp"

namespace hotwire {

inline constexpr int kNeighbours = 10;

/// Discrete viewpoints on a sphere with cached unit directions and angular
/// k-nearest neighbours.
struct CandidateSet {
  std::vector<Viewpoint> viewpoints;
  std::vector<Vec3> directions;
  std::vector<std::vector<int>> knn;

  std::size_t size() const { return viewpoints.size(); }
  double angle(int a, int b) const;
  /// Candidate with the smallest angular distance to `dir` (lowest index on ties).
  int nearest(const Vec3& dir) const;
};

Viewpoint viewpoint_from_direction(const Vec3& dir, double r);

/// Builds a set from explicit viewpoints and computes the neighbour lists.
CandidateSet make_candidate_set(std::vector<Viewpoint> viewpoints, int k = kNeighbours);

/// Fibonacci lattice: golden-angle azimuth, uniform-in-sin(phi) elevation.
CandidateSet fibonacci_sample(int n, double r = 2.0, int k = kNeighbours);

/// Candidates with phi >= 0.
std::vector<int> upper_hemisphere(const CandidateSet& set);

/// Subset with neighbour lists recomputed inside the subset.
CandidateSet subset(const CandidateSet& set, const std::vector<int>& indices, int k = kNeighbours);

/// Greedy farthest-point sampling by angular distance from a random seed.
std::vector<int> farthest_point_init(const CandidateSet& set, int n_pop, std::mt19937_64& rng);

}  // namespace hotwire
