#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cpca/cover.hpp"
#include "cpca/linalg.hpp"
#include "cpca/spectrum_id.hpp"

namespace cpca {

/// Global intrinsic-dimension estimate assembled from the local subsets.
struct GlobalEstimate {
  std::vector<double> aggregated;  // lambda_j = sum_i lambda_ij
  DenoisedSpectrum aggregated_denoised;
  IdDecision decision;
  double mean_local_id = 0.0;
  std::size_t subset_count = 0;
  std::vector<LocalEstimate> locals;
  Cover cover;  // locals[i] summarizes cover.subsets[i]; empty for incremental estimates

  std::size_t global_id() const { return decision.id; }
};

/// Index-wise sum of descending local spectra, shorter ones zero-padded.
/// Subsets are summed in order, so the result is reproducible bit for bit.
std::vector<double> aggregate_spectra(std::span<const LocalEstimate> locals);

/// Applies the criteria to an aggregated spectrum and averages local IDs.
GlobalEstimate summarize(std::vector<LocalEstimate> locals, std::vector<double> aggregated,
                         const IdCriteria& criteria);

/// Cover-based local PCA over a whole point set.
GlobalEstimate estimate_batch(const PointSet& points, const NeighborhoodSpec& spec,
                              const IdCriteria& criteria);

/// Same as above with a precomputed distance matrix (reused across sweeps).
GlobalEstimate estimate_batch(const PointSet& points, const DistanceMatrix& dist,
                              const NeighborhoodSpec& spec, const IdCriteria& criteria);

/// Local estimates for each retained subset of a cover.
std::vector<LocalEstimate> estimate_subsets(const PointSet& points, const Cover& cover,
                                            const IdCriteria& criteria);

}  // namespace cpca
