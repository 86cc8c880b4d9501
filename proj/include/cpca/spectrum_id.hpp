#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "cpca/linalg.hpp"

namespace cpca {

/// Thresholds for turning an eigenvalue spectrum into an integer dimension.
struct IdCriteria {
  double alpha = 10.0;             // spectral-gap ratio threshold
  double beta = 0.8;               // cumulative explained-variance threshold
  double noise_p = 0.95;           // cumulative threshold marking the noise tail
  std::size_t noise_pc_cap = 10;   // max tail components averaged into the noise floor
  bool filter_noise = true;        // false: plain local PCA, no noise floor

  /// The same thresholds with the noise filter off.
  IdCriteria without_filter() const {
    IdCriteria c = *this;
    c.filter_noise = false;
    return c;
  }

  /// Throws InvalidArgument unless alpha > 1, beta and noise_p lie in (0, 1),
  /// and noise_pc_cap >= 1.
  void validate() const;
};

/// A spectrum with the estimated noise floor removed.
struct DenoisedSpectrum {
  Spectrum raw;
  double noise_var = 0.0;
  std::size_t noise_start = 1;  // 1-based index of the first noise component
  std::vector<double> variances;
  bool flat = false;             // total variance was zero
  bool noise_dominated = false;  // the first component alone crossed noise_p
};

/// Smallest 1-based r whose cumulative variance ratio strictly exceeds p.
/// Returns nullopt for a spectrum with zero total variance.
std::optional<std::size_t> locate_noise_start(std::span<const double> spectrum, double p);

/// Mean of the first min(cap, m - r + 1) eigenvalues from the noise start r
/// onward. Zero when the filter is off or the spectrum is flat.
double estimate_noise_variance(std::span<const double> spectrum, const IdCriteria& criteria);

/// Element-wise max(lambda_i - noise_var, 0).
DenoisedSpectrum denoise(const Spectrum& spectrum, double noise_var);

/// Noise floor estimation followed by denoising (C-PCA), or a pass-through
/// when criteria.filter_noise is false (L-PCA).
DenoisedSpectrum filter_spectrum(const Spectrum& spectrum, const IdCriteria& criteria);

/// Smallest d in [1, m-1] with variances[d-1] > 0 and
/// variances[d-1] / variances[d] > alpha. A zero denominator counts as an
/// infinite ratio.
std::optional<std::size_t> id_by_ratio(std::span<const double> variances, double alpha);

/// Smallest d whose leading variances exceed fraction beta of the total.
/// Returns 0 for an all-zero list.
std::size_t id_by_variance_pct(std::span<const double> variances, double beta);

struct IdDecision {
  std::size_t id = 0;
  std::optional<std::size_t> ratio_id;  // from the spectral-gap test, if it fired
  std::size_t pct_id = 0;               // from the cumulative-variance test
};

/// Gap test first; the cumulative-variance test is the fallback.
IdDecision decide_id(std::span<const double> variances, const IdCriteria& criteria);

/// Per-subset result of local PCA.
struct LocalEstimate {
  std::size_t subset_index = 0;
  Spectrum spectrum;
  DenoisedSpectrum denoised;
  IdDecision decision;

  std::size_t local_id() const { return decision.id; }
  double noise_var() const { return denoised.noise_var; }
};

/// Runs the spectrum-level half of the pipeline on an existing spectrum.
LocalEstimate estimate_from_spectrum(Spectrum spectrum, const IdCriteria& criteria);

/// Covariance spectrum, optional noise filter, then decide_id.
LocalEstimate local_id(const PointSet& subset, const IdCriteria& criteria);

}  // namespace cpca
