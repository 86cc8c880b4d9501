#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "cpca/cover.hpp"
#include "cpca/estimator.hpp"
#include "cpca/spectrum_id.hpp"

namespace cpca {

/// One retained cover subset as held by the incremental estimator.
struct StoredSubset {
  std::size_t center_index = 0;  // index of the center in the seed set
  double radius = 0.0;           // fixed at initialization
  Eigen::MatrixXd members;       // one point per row, center first
  LocalEstimate local;

  auto center() const { return members.row(0); }
};

struct InsertResult {
  bool accepted = false;
  std::size_t subset = 0;     // nearest center
  double distance = 0.0;      // to that center
};

/// Streaming estimator: a cover built once from a seed set, then new points are
/// routed to their nearest center and that subset's spectrum is recomputed.
///
/// Points farther from the nearest center than its radius are counted as
/// outliers and otherwise ignored. Radii never change after initialization.
/// Not safe for concurrent inserts.
class IncrementalEstimator {
 public:
  static IncrementalEstimator initialize(const PointSet& seed, const NeighborhoodSpec& spec,
                                         const IdCriteria& criteria);

  /// Throws DataError when x has the wrong dimension or non-finite entries.
  InsertResult insert(std::span<const double> x);

  GlobalEstimate estimate() const;

  /// Sum of the stored per-subset spectra, recomputed from scratch.
  std::vector<double> recompute_aggregate() const;

  std::size_t dim() const { return dim_; }
  const IdCriteria& criteria() const { return criteria_; }
  const std::vector<StoredSubset>& subsets() const { return subsets_; }
  const std::vector<double>& aggregated() const { return aggregated_; }
  std::size_t outlier_count() const { return outliers_; }
  std::size_t accepted_count() const { return accepted_; }

  /// Text state file, version 1. Doubles are written as hex floats so a
  /// save/load round trip is exact. See docs/state-format.md.
  void save(std::ostream& out) const;
  static IncrementalEstimator load(std::istream& in);

  friend bool operator==(const IncrementalEstimator& a, const IncrementalEstimator& b);

 private:
  IncrementalEstimator() = default;

  std::size_t dim_ = 0;
  IdCriteria criteria_;
  std::vector<StoredSubset> subsets_;
  std::vector<double> aggregated_;
  std::size_t outliers_ = 0;
  std::size_t accepted_ = 0;
};

}  // namespace cpca
