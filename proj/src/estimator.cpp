#include "cpca/estimator.hpp"

#include <algorithm>

#include "cpca/error.hpp"

namespace cpca {

std::vector<double> aggregate_spectra(std::span<const LocalEstimate> locals) {
  std::size_t length = 0;
  for (const LocalEstimate& local : locals) length = std::max(length, local.spectrum.size());
  std::vector<double> sum(length, 0.0);
  for (const LocalEstimate& local : locals) {
    for (std::size_t j = 0; j < local.spectrum.size(); ++j) sum[j] += local.spectrum.eigenvalues[j];
  }
  return sum;
}

GlobalEstimate summarize(std::vector<LocalEstimate> locals, std::vector<double> aggregated,
                         const IdCriteria& criteria) {
  GlobalEstimate out;
  Spectrum total;
  total.eigenvalues = aggregated;
  for (const LocalEstimate& local : locals) total.subset_size += local.spectrum.subset_size;

  const LocalEstimate global = estimate_from_spectrum(std::move(total), criteria);
  out.aggregated = std::move(aggregated);
  out.aggregated_denoised = global.denoised;
  out.decision = global.decision;
  out.subset_count = locals.size();

  double id_sum = 0.0;
  for (const LocalEstimate& local : locals) id_sum += static_cast<double>(local.local_id());
  out.mean_local_id = locals.empty() ? 0.0 : id_sum / static_cast<double>(locals.size());
  out.locals = std::move(locals);
  return out;
}

std::vector<LocalEstimate> estimate_subsets(const PointSet& points, const Cover& cover,
                                            const IdCriteria& criteria) {
  std::vector<LocalEstimate> locals;
  locals.reserve(cover.subsets.size());
  for (std::size_t s = 0; s < cover.subsets.size(); ++s) {
    LocalEstimate local = local_id(points.subset(cover.subsets[s].members), criteria);
    local.subset_index = s;
    locals.push_back(std::move(local));
  }
  return locals;
}

GlobalEstimate estimate_batch(const PointSet& points, const NeighborhoodSpec& spec,
                              const IdCriteria& criteria) {
  return estimate_batch(points, distance_matrix(points), spec, criteria);
}

GlobalEstimate estimate_batch(const PointSet& points, const DistanceMatrix& dist,
                              const NeighborhoodSpec& spec, const IdCriteria& criteria) {
  criteria.validate();
  if (dist.size() != points.size()) {
    throw InvalidArgument("distance matrix does not match the point set");
  }
  Cover cover = minimum_cover(build_neighborhoods(dist, spec), dist);
  std::vector<LocalEstimate> locals = estimate_subsets(points, cover, criteria);
  std::vector<double> aggregated = aggregate_spectra(locals);
  GlobalEstimate out = summarize(std::move(locals), std::move(aggregated), criteria);
  out.cover = std::move(cover);
  return out;
}

}  // namespace cpca
