#include "cpca/mle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cpca/error.hpp"

namespace cpca {

double mle_local(std::span<const double> sorted_distances, std::size_t k) {
  if (k < 2) throw InvalidArgument("MLE needs k >= 2");
  if (sorted_distances.size() < k) {
    throw InvalidArgument("MLE needs at least k neighbor distances");
  }
  const double tk = sorted_distances[k - 1];
  double sum = 0.0;
  for (std::size_t j = 0; j + 1 < k; ++j) {
    if (!(sorted_distances[j] > 0.0)) throw DataError("degenerate neighbor: zero distance");
    sum += std::log(tk / sorted_distances[j]);
  }
  if (sum == 0.0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(k - 1) / sum;
}

MleEstimate mle_global(const PointSet& points, std::size_t k) {
  if (k < 2) throw InvalidArgument("MLE needs k >= 2");
  if (points.size() <= k) {
    throw InvalidArgument("MLE needs n > k (k=" + std::to_string(k) +
                          ", n=" + std::to_string(points.size()) + ")");
  }
  return mle_global(distance_matrix(points), k);
}

MleEstimate mle_global(const DistanceMatrix& dist, std::size_t k) {
  const std::size_t n = dist.size();
  if (k < 2) throw InvalidArgument("MLE needs k >= 2");
  if (n <= k) {
    throw InvalidArgument("MLE needs n > k (k=" + std::to_string(k) +
                          ", n=" + std::to_string(n) + ")");
  }

  MleEstimate out;
  out.k = k;
  out.local_values.reserve(n);

  std::vector<std::size_t> order;
  std::vector<double> neighbors(k);
  double inverse_sum = 0.0;
  double finite_sum = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < n; ++i) {
    order.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) order.push_back(j);
    }
    const auto kth = order.begin() + static_cast<std::ptrdiff_t>(k);
    std::partial_sort(order.begin(), kth, order.end(), [&](std::size_t a, std::size_t b) {
      return dist(i, a) < dist(i, b) || (dist(i, a) == dist(i, b) && a < b);
    });
    for (std::size_t j = 0; j < k; ++j) neighbors[j] = dist(i, order[j]);

    double value = 0.0;
    try {
      value = mle_local(neighbors, k);
    } catch (const DataError&) {
      out.local_values.push_back(std::numeric_limits<double>::quiet_NaN());
      ++out.degenerate_count;
      continue;
    }
    out.local_values.push_back(value);
    ++used;
    if (std::isinf(value)) {
      ++out.infinite_count;
    } else {
      inverse_sum += 1.0 / value;
      finite_sum += value;
    }
  }

  if (used == 0) throw DataError("degenerate neighbor: every point has a duplicate neighbor");
  if (!(inverse_sum > 0.0)) throw DataError("degenerate neighbor: all local estimates diverge");
  out.global_value = 1.0 / (inverse_sum / static_cast<double>(used));
  const std::size_t finite = used - out.infinite_count;
  out.direct_mean = finite_sum / static_cast<double>(finite);
  return out;
}

}  // namespace cpca
