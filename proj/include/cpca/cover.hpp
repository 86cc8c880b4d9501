#pragma once

#include <cstddef>
#include <vector>

#include "cpca/linalg.hpp"

namespace cpca {

/// How the neighborhood of a point is defined: its k nearest points, or every
/// point strictly closer than eps.
struct NeighborhoodSpec {
  enum class Mode { knn, eps };

  Mode mode = Mode::knn;
  std::size_t k = 0;
  double eps = 0.0;

  static NeighborhoodSpec nearest(std::size_t k) { return {Mode::knn, k, 0.0}; }
  static NeighborhoodSpec ball(double eps) { return {Mode::eps, 0, eps}; }

  /// Throws InvalidArgument unless 1 <= k <= n-1 (knn) or eps > 0 (eps).
  void validate(std::size_t n) const;
};

/// Index set F_i = {i, i_1, ..., i_P} around center i.
struct Neighborhood {
  std::size_t center = 0;
  std::vector<std::size_t> members;  // members[0] == center
  double radius = 0.0;
};

/// Neighborhoods retained by the greedy cover pass.
struct Cover {
  std::vector<Neighborhood> subsets;
  std::size_t n = 0;
  /// Smallest membership count observed right after any removal. The greedy
  /// pass never lets this fall below 1. Zero when nothing was removed.
  std::size_t min_frequency_after_removal = 0;
};

/// One neighborhood per point, center first.
///
/// knn: neighbors sorted by (distance, index), so ties at the k-th rank go to
/// the lower index. eps: every j != i with d(i, j) < eps, in ascending index
/// order; an isolated point yields the singleton {i}.
std::vector<Neighborhood> build_neighborhoods(const DistanceMatrix& dist,
                                              const NeighborhoodSpec& spec);

/// Greedy approximate minimum set cover.
///
/// Q_j counts the neighborhoods containing point j. Visiting centers in
/// ascending order, F_i is dropped when every one of its members still has
/// Q > 1 (and their counts are decremented); otherwise it is kept with radius
/// max_j d(i, j) over its members.
Cover minimum_cover(std::vector<Neighborhood> neighborhoods, const DistanceMatrix& dist);

}  // namespace cpca
