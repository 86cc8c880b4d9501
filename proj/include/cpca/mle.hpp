#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cpca/linalg.hpp"

namespace cpca {

/// Levina-Bickel local estimate from the k smallest neighbor distances
/// T_1 <= ... <= T_k (self excluded):
///
///   d(x) = [ (1/(k-1)) sum_{j=1}^{k-1} log(T_k / T_j) ]^-1
///
/// Returns +infinity when every T_j equals T_k. Throws DataError when any
/// T_j is zero (duplicate point) and InvalidArgument when k < 2 or fewer than
/// k distances are given.
double mle_local(std::span<const double> sorted_distances, std::size_t k);

struct MleEstimate {
  std::size_t k = 0;
  /// Per-point estimates. +inf for equidistant neighbors, NaN for points with
  /// a zero-distance neighbor.
  std::vector<double> local_values;
  /// Inverse of the mean of local inverses (MacKay-Ghahramani averaging).
  double global_value = 0.0;
  /// Plain mean of the finite local values; diagnostic only.
  double direct_mean = 0.0;
  std::size_t infinite_count = 0;    // contribute inverse 0
  std::size_t degenerate_count = 0;  // duplicates, excluded from the average
};

/// Global MLE estimate. Neighbor ranking breaks distance ties by index.
/// Throws InvalidArgument when k < 2 or n <= k, and DataError when no point
/// has a usable neighbor list.
MleEstimate mle_global(const PointSet& points, std::size_t k);
MleEstimate mle_global(const DistanceMatrix& dist, std::size_t k);

}  // namespace cpca
