#include "cpca/spectrum_id.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "cpca/error.hpp"

namespace cpca {

void IdCriteria::validate() const {
  if (!(alpha > 1.0)) throw InvalidArgument("alpha must be greater than 1");
  if (!(beta > 0.0 && beta < 1.0)) throw InvalidArgument("beta must lie in (0, 1)");
  if (!(noise_p > 0.0 && noise_p < 1.0)) throw InvalidArgument("noise_p must lie in (0, 1)");
  if (noise_pc_cap < 1) throw InvalidArgument("noise_pc_cap must be at least 1");
}

std::optional<std::size_t> locate_noise_start(std::span<const double> spectrum, double p) {
  const double total = std::accumulate(spectrum.begin(), spectrum.end(), 0.0);
  if (!(total > 0.0)) return std::nullopt;
  double prefix = 0.0;
  for (std::size_t r = 1; r <= spectrum.size(); ++r) {
    prefix += spectrum[r - 1];
    if (prefix / total > p) return r;
  }
  // The full prefix is 1 up to rounding; p < 1 makes this unreachable in
  // practice, but the last component is the only sensible answer.
  return spectrum.size();
}

double estimate_noise_variance(std::span<const double> spectrum, const IdCriteria& criteria) {
  if (!criteria.filter_noise || spectrum.empty()) return 0.0;
  const auto start = locate_noise_start(spectrum, criteria.noise_p);
  if (!start) return 0.0;
  const std::size_t first = *start - 1;
  const std::size_t count = std::min(criteria.noise_pc_cap, spectrum.size() - first);
  const auto tail = spectrum.subspan(first, count);
  return std::accumulate(tail.begin(), tail.end(), 0.0) / static_cast<double>(count);
}

DenoisedSpectrum denoise(const Spectrum& spectrum, double noise_var) {
  if (!(noise_var >= 0.0)) throw InvalidArgument("noise variance must be non-negative");
  DenoisedSpectrum out;
  out.raw = spectrum;
  out.noise_var = noise_var;
  out.noise_start = std::max<std::size_t>(spectrum.size(), 1);
  out.flat = !(spectrum.total() > 0.0);
  out.variances.reserve(spectrum.size());
  for (double lambda : spectrum.eigenvalues) {
    out.variances.push_back(std::max(lambda - noise_var, 0.0));
  }
  return out;
}

DenoisedSpectrum filter_spectrum(const Spectrum& spectrum, const IdCriteria& criteria) {
  if (!criteria.filter_noise) return denoise(spectrum, 0.0);
  const auto start = locate_noise_start(spectrum.eigenvalues, criteria.noise_p);
  DenoisedSpectrum out = denoise(spectrum, estimate_noise_variance(spectrum.eigenvalues, criteria));
  if (start) {
    out.noise_start = *start;
    out.noise_dominated = *start == 1;
  }
  return out;
}

std::optional<std::size_t> id_by_ratio(std::span<const double> variances, double alpha) {
  for (std::size_t d = 1; d < variances.size(); ++d) {
    const double head = variances[d - 1];
    const double next = variances[d];
    if (!(head > 0.0)) break;  // descending: everything after is zero too
    if (next == 0.0 || head / next > alpha) return d;
  }
  return std::nullopt;
}

std::size_t id_by_variance_pct(std::span<const double> variances, double beta) {
  const double total = std::accumulate(variances.begin(), variances.end(), 0.0);
  if (!(total > 0.0)) return 0;
  double prefix = 0.0;
  for (std::size_t d = 1; d <= variances.size(); ++d) {
    prefix += variances[d - 1];
    if (prefix / total > beta) return d;
  }
  return variances.size();
}

IdDecision decide_id(std::span<const double> variances, const IdCriteria& criteria) {
  IdDecision out;
  out.ratio_id = id_by_ratio(variances, criteria.alpha);
  out.pct_id = id_by_variance_pct(variances, criteria.beta);
  out.id = out.ratio_id.value_or(out.pct_id);
  return out;
}

LocalEstimate estimate_from_spectrum(Spectrum spectrum, const IdCriteria& criteria) {
  LocalEstimate out;
  out.denoised = filter_spectrum(spectrum, criteria);
  out.decision = decide_id(out.denoised.variances, criteria);
  out.spectrum = std::move(spectrum);
  return out;
}

LocalEstimate local_id(const PointSet& subset, const IdCriteria& criteria) {
  return estimate_from_spectrum(covariance_spectrum(subset), criteria);
}

}  // namespace cpca
