#include "cpca/cover.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "cpca/error.hpp"

namespace cpca {

void NeighborhoodSpec::validate(std::size_t n) const {
  switch (mode) {
    case Mode::knn:
      if (k < 1 || k + 1 > n) {
        throw InvalidArgument("k must satisfy 1 <= k <= n-1 (k=" + std::to_string(k) +
                              ", n=" + std::to_string(n) + ")");
      }
      break;
    case Mode::eps:
      if (!(eps > 0.0) || !std::isfinite(eps)) {
        throw InvalidArgument("eps must be a positive finite radius");
      }
      break;
  }
}

std::vector<Neighborhood> build_neighborhoods(const DistanceMatrix& dist,
                                              const NeighborhoodSpec& spec) {
  const std::size_t n = dist.size();
  spec.validate(n);

  std::vector<Neighborhood> out(n);
  std::vector<std::size_t> others;
  others.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Neighborhood& nb = out[i];
    nb.center = i;
    nb.members.push_back(i);

    others.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      if (spec.mode == NeighborhoodSpec::Mode::eps && !(dist(i, j) < spec.eps)) continue;
      others.push_back(j);
    }

    if (spec.mode == NeighborhoodSpec::Mode::knn) {
      const auto closer = [&](std::size_t a, std::size_t b) {
        const double da = dist(i, a);
        const double db = dist(i, b);
        return da < db || (da == db && a < b);
      };
      const auto kth = others.begin() + static_cast<std::ptrdiff_t>(spec.k);
      std::partial_sort(others.begin(), kth, others.end(), closer);
      others.erase(kth, others.end());
    }
    nb.members.insert(nb.members.end(), others.begin(), others.end());
  }
  return out;
}

Cover minimum_cover(std::vector<Neighborhood> neighborhoods, const DistanceMatrix& dist) {
  const std::size_t n = dist.size();
  if (neighborhoods.size() != n) {
    throw InvalidArgument("expected one neighborhood per point");
  }

  std::vector<std::size_t> freq(n, 0);
  for (const Neighborhood& nb : neighborhoods) {
    for (std::size_t j : nb.members) {
      if (j >= n) throw InvalidArgument("neighborhood member out of range");
      ++freq[j];
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (freq[j] == 0) {
      throw InvalidArgument("point " + std::to_string(j) + " is in no neighborhood");
    }
  }

  Cover cover;
  cover.n = n;
  cover.min_frequency_after_removal = std::numeric_limits<std::size_t>::max();

  for (Neighborhood& nb : neighborhoods) {
    const bool removable = std::all_of(nb.members.begin(), nb.members.end(),
                                       [&](std::size_t j) { return freq[j] > 1; });
    if (removable) {
      for (std::size_t j : nb.members) {
        --freq[j];
        if (freq[j] < 1) throw std::logic_error("cover frequency dropped to zero");
        cover.min_frequency_after_removal = std::min(cover.min_frequency_after_removal, freq[j]);
      }
      continue;
    }
    nb.radius = 0.0;
    for (std::size_t j : nb.members) nb.radius = std::max(nb.radius, dist(nb.center, j));
    cover.subsets.push_back(std::move(nb));
  }
  if (cover.min_frequency_after_removal == std::numeric_limits<std::size_t>::max()) {
    cover.min_frequency_after_removal = 0;
  }
  return cover;
}

}  // namespace cpca
