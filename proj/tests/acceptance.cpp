// Acceptance suite: one PASS/FAIL line per criterion, indented detail lines
// below it. Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include "cpca/cover.hpp"
#include "cpca/datagen.hpp"
#include "cpca/estimator.hpp"
#include "cpca/incremental.hpp"
#include "cpca/mle.hpp"
#include "oracles.hpp"

using namespace cpca;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

class Report {
 public:
  void detail(bool ok, const std::string& text) {
    std::printf("    %s %s\n", ok ? "ok  " : "FAIL", text.c_str());
    std::fflush(stdout);
  }
  void criterion(int id, const std::string& name, bool ok, double secs) {
    std::printf("%s %d %s (%.2f s)\n", ok ? "PASS" : "FAIL", id, name.c_str(), secs);
    std::fflush(stdout);
    if (!ok) ++failures_;
  }
  int failures() const { return failures_; }

 private:
  int failures_ = 0;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c, d);
  return buf;
}

PointSet embedded_cube(std::size_t d) {
  return corrupt(generate(ManifoldSpec{Cube{1000, d}, 42 + d}), CorruptionSpec{0.0, 10, 7 + d});
}

void exact_rank_recovery(Report& report) {
  const auto start = Clock::now();
  bool all = true;
  for (std::size_t d = 1; d <= 5; ++d) {
    const PointSet p = embedded_cube(d);
    for (std::size_t k : {10, 20, 40}) {
      const auto t0 = Clock::now();
      const GlobalEstimate g = estimate_batch(p, NeighborhoodSpec::nearest(k), IdCriteria{});
      const double secs = seconds_since(t0);
      const bool ok = g.global_id() == d && g.mean_local_id == static_cast<double>(d) && secs < 10.0;
      all = all && ok;
      report.detail(ok, fmt("d=%.0f k=%.0f global_id=%.0f mean_local_id=%.6f", static_cast<double>(d),
                            static_cast<double>(k), static_cast<double>(g.global_id()),
                            g.mean_local_id) +
                            fmt(" time=%.2fs", secs));
    }
  }
  report.criterion(1, "exact-rank recovery, d-cube in D=10", all, seconds_since(start));
}

void mobius_reproduction(Report& report) {
  const auto start = Clock::now();
  const PointSet mobius = generate(ManifoldSpec{Mobius{}, 7});
  const DistanceMatrix dist = distance_matrix(mobius);
  bool in_range = true;
  bool mle_range = true;
  double e36 = 0.0;
  double e40 = 0.0;
  for (std::size_t k = 4; k <= 40; k += 4) {
    const GlobalEstimate g = estimate_batch(mobius, dist, NeighborhoodSpec::nearest(k), IdCriteria{});
    const double mle = mle_global(dist, k).global_value;
    if (k == 36) e36 = g.mean_local_id;
    if (k == 40) e40 = g.mean_local_id;
    if (k >= 20) {
      in_range = in_range && g.mean_local_id >= 1.7 && g.mean_local_id <= 2.3;
      mle_range = mle_range && mle >= 1.7 && mle <= 2.5;
    }
    report.detail(k < 20 || (g.mean_local_id >= 1.7 && g.mean_local_id <= 2.3 && mle >= 1.7 && mle <= 2.5),
                  fmt("k=%.0f cpca=%.4f global_id=%.0f mle=%.4f", static_cast<double>(k), g.mean_local_id,
                      static_cast<double>(g.global_id()), mle));
  }
  const double secs = seconds_since(start);
  const bool converged = std::abs(e36 - e40) <= 0.3;
  report.detail(in_range, "cpca in [1.7, 2.3] for k >= 20");
  report.detail(converged, fmt("|e(36) - e(40)| = %.4f <= 0.3", std::abs(e36 - e40)));
  report.detail(mle_range, "mle in [1.7, 2.5] for k >= 20");
  report.detail(secs < 60.0, fmt("runtime %.2fs < 60s", secs));
  report.criterion(2, "Mobius sweep k=4..40", in_range && converged && mle_range && secs < 60.0, secs);
}

void noise_filtering(Report& report) {
  const auto start = Clock::now();
  const PointSet noisy =
      corrupt(generate(ManifoldSpec{Mobius{}, 1}), CorruptionSpec{0.2, 4, 2});
  const DistanceMatrix dist = distance_matrix(noisy);
  bool ordered = true;
  bool in_range = true;
  double gap40 = 0.0;
  for (std::size_t k = 24; k <= 40; k += 4) {
    const auto spec = NeighborhoodSpec::nearest(k);
    const double c = estimate_batch(noisy, dist, spec, IdCriteria{}).mean_local_id;
    const double l = estimate_batch(noisy, dist, spec, IdCriteria{}.without_filter()).mean_local_id;
    ordered = ordered && c <= l;
    in_range = in_range && c >= 1.5 && c <= 3.0;
    if (k == 40) gap40 = l - c;
    report.detail(c <= l && c >= 1.5 && c <= 3.0,
                  fmt("k=%.0f cpca=%.4f lpca=%.4f", static_cast<double>(k), c, l));
  }
  const bool gap = gap40 >= 0.2;
  report.detail(ordered, "cpca <= lpca for k >= 24");
  report.detail(in_range, "cpca in [1.5, 3.0] for k >= 24");
  report.detail(gap, fmt("lpca - cpca at k=40 = %.4f >= 0.2", gap40));
  report.criterion(3, "noise filtering, Mobius in D=4 with variance 0.2", ordered && in_range && gap,
                   seconds_since(start));
}

void noise_variance_estimation(Report& report) {
  const auto start = Clock::now();
  const PointSet clean = generate(ManifoldSpec{Subspace{2000, 3, 10}, 11});
  bool all = true;
  for (double sigma2 : {0.01, 0.1}) {
    const PointSet noisy = corrupt(clean, CorruptionSpec{sigma2, 0, 12});
    const GlobalEstimate g = estimate_batch(noisy, NeighborhoodSpec::nearest(40), IdCriteria{});
    double sum = 0.0;
    for (const LocalEstimate& l : g.locals) sum += l.noise_var();
    const double mean = sum / static_cast<double>(g.locals.size());
    const double rel = std::abs(mean / sigma2 - 1.0);
    const bool ok = rel <= 0.25;
    all = all && ok;
    report.detail(ok, fmt("sigma2=%.2f mean sigma_hat2=%.5f relative error=%.3f", sigma2, mean, rel));
  }
  report.criterion(4, "noise variance within 25%, d=3 subspace in D=10, k=40", all, seconds_since(start));
}

void cover_invariants(Report& report) {
  const auto start = Clock::now();
  bool coverage = true;
  bool radii = true;
  bool frequency = true;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const std::size_t n = 5 + seed % 80;
    const Eigen::MatrixXd x = cpca::testing::random_matrix(n, 1 + seed % 6, 1000 + seed);
    const DistanceMatrix d = distance_matrix(PointSet(x));
    const NeighborhoodSpec spec = seed % 2 == 0
                                      ? NeighborhoodSpec::nearest(1 + seed % std::min<std::size_t>(n - 1, 15))
                                      : NeighborhoodSpec::ball(0.2 + 0.15 * static_cast<double>(seed % 12));
    const Cover cover = minimum_cover(build_neighborhoods(d, spec), d);

    std::vector<std::size_t> count(n, 0);
    for (const Neighborhood& nb : cover.subsets) {
      double r = 0.0;
      for (std::size_t j : nb.members) {
        ++count[j];
        r = std::max(r, d(nb.center, j));
      }
      radii = radii && nb.radius == r;
    }
    coverage = coverage && std::all_of(count.begin(), count.end(), [](std::size_t c) { return c >= 1; });
    if (cover.subsets.size() < n) frequency = frequency && cover.min_frequency_after_removal >= 1;
  }
  report.detail(coverage, "200 instances: every point covered");
  report.detail(radii, "200 instances: radii recompute exactly");
  report.detail(frequency, "200 instances: frequencies never drop below 1");

  const PointSet line = PointSet::from_rows({{0}, {1}, {2}, {3}, {4}});
  const DistanceMatrix d = distance_matrix(line);
  const Cover trace = minimum_cover(build_neighborhoods(d, NeighborhoodSpec::nearest(2)), d);
  const bool hand = trace.subsets.size() == 2 && trace.subsets[0].center == 1 &&
                    trace.subsets[0].radius == 1.0 && trace.subsets[1].center == 4 &&
                    trace.subsets[1].radius == 2.0;
  report.detail(hand, "5-point line, k=2: {F_1, r=1; F_4, r=2}");
  report.criterion(5, "cover invariants", coverage && radii && frequency && hand, seconds_since(start));
}

void incremental_consistency(Report& report) {
  const auto start = Clock::now();
  const PointSet seed = generate(ManifoldSpec{Mobius{600}, 3});
  IncrementalEstimator state =
      IncrementalEstimator::initialize(seed, NeighborhoodSpec::nearest(12), IdCriteria{});

  double worst = 0.0;
  std::size_t accepted = 0;
  for (std::size_t i = 0; i < 100; ++i) {
    const StoredSubset& s = state.subsets()[(i * 13) % state.subsets().size()];
    const auto member = static_cast<Eigen::Index>(1 + i % static_cast<std::size_t>(s.members.rows() - 1));
    const Eigen::RowVectorXd p = 0.5 * (s.center() + s.members.row(member));
    const std::vector<double> x(p.data(), p.data() + p.size());
    accepted += state.insert(x).accepted ? 1 : 0;

    const std::vector<double> fresh = state.recompute_aggregate();
    double scale = 0.0;
    double diff = 0.0;
    for (std::size_t j = 0; j < fresh.size(); ++j) {
      scale = std::max(scale, std::abs(fresh[j]));
      diff = std::max(diff, std::abs(fresh[j] - state.aggregated()[j]));
    }
    worst = std::max(worst, diff / scale);
  }
  const bool all_in = accepted == 100;
  const bool consistent = worst <= 1e-10;
  report.detail(all_in, fmt("%.0f of 100 in-ball points accepted", static_cast<double>(accepted)));
  report.detail(consistent, fmt("max relative aggregate drift %.3e <= 1e-10", worst));

  const IncrementalEstimator before = state;
  bool no_op = true;
  for (double far : {1e3, -5e2, 1e6}) {
    const InsertResult r = state.insert(std::vector<double>(3, far));
    no_op = no_op && !r.accepted;
  }
  no_op = no_op && before.aggregated() == state.aggregated() && before.subsets().size() == state.subsets().size();
  for (std::size_t s = 0; no_op && s < state.subsets().size(); ++s) {
    no_op = before.subsets()[s].members == state.subsets()[s].members &&
            before.subsets()[s].local.spectrum.eigenvalues == state.subsets()[s].local.spectrum.eigenvalues;
  }
  no_op = no_op && state.outlier_count() == before.outlier_count() + 3;
  report.detail(no_op, "3 outliers leave state bit-identical apart from the outlier count");
  report.criterion(6, "incremental-batch consistency", all_in && consistent && no_op, seconds_since(start));
}

void eigensolver_correctness(Report& report) {
  const auto start = Clock::now();
  double worst_recon = 0.0;
  double worst_ortho = 0.0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const std::size_t n = 1 + seed % 50;
    const Eigen::MatrixXd a = cpca::testing::random_symmetric(n, 5000 + seed);
    const SymmetricEigen e = eigendecompose_symmetric(a);
    const Eigen::VectorXd values = Eigen::Map<const Eigen::VectorXd>(e.values.data(), e.values.size());
    const Eigen::MatrixXd recon = e.vectors * values.asDiagonal() * e.vectors.transpose();
    worst_recon = std::max(worst_recon, (recon - a).cwiseAbs().maxCoeff());
    const Eigen::MatrixXd gram = e.vectors.transpose() * e.vectors;
    worst_ortho = std::max(worst_ortho,
                           (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff());
  }
  double worst_path = 0.0;
  double worst_oracle = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t n = 2 + seed % 20;
    const std::size_t dim = n + 1 + seed % 30;
    const PointSet p(cpca::testing::random_matrix(n, dim, 9000 + seed));
    const Spectrum gram = covariance_spectrum(p, SpectrumPath::gram);
    const Spectrum direct = covariance_spectrum(p, SpectrumPath::direct);
    const std::vector<double> oracle = cpca::testing::dense_covariance_spectrum(p.coords());
    for (std::size_t j = 0; j < gram.size(); ++j) {
      worst_path = std::max(worst_path, std::abs(gram.eigenvalues[j] - direct.eigenvalues[j]));
      worst_oracle = std::max(worst_oracle, std::abs(gram.eigenvalues[j] - std::max(oracle[j], 0.0)));
    }
  }
  const bool ok = worst_recon < 1e-9 && worst_ortho < 1e-9 && worst_path < 1e-9 && worst_oracle < 1e-9;
  report.detail(worst_recon < 1e-9, fmt("500 matrices: reconstruction residual %.3e", worst_recon));
  report.detail(worst_ortho < 1e-9, fmt("500 matrices: orthonormality residual %.3e", worst_ortho));
  report.detail(worst_path < 1e-9, fmt("50 D>n sets: gram vs direct %.3e", worst_path));
  report.detail(worst_oracle < 1e-9, fmt("50 D>n sets: gram vs reference solver %.3e", worst_oracle));
  report.criterion(7, "eigensolver correctness", ok, seconds_since(start));
}

void mle_identities(Report& report) {
  const auto start = Clock::now();
  const PointSet mobius = generate(ManifoldSpec{Mobius{500}, 2});
  const MleEstimate base = mle_global(mobius, 10);
  bool scale = true;
  for (double c : {0.125, 0.5, 2.0, 8.0, 1024.0}) {
    const MleEstimate s = mle_global(PointSet(c * mobius.coords()), 10);
    scale = scale && s.global_value == base.global_value;
  }
  report.detail(scale, fmt("scale by powers of two leaves the estimate bit-identical (%.6f)", base.global_value));

  const PointSet segment = corrupt(generate(ManifoldSpec{Cube{1000, 1}, 2}), CorruptionSpec{0.0, 5, 3});
  const double line = mle_global(segment, 10).global_value;
  const bool line_ok = line >= 0.9 && line <= 1.1;
  report.detail(line_ok, fmt("segment in D=5, k=10: %.4f in [0.9, 1.1]", line));

  const double sphere = mle_global(generate(ManifoldSpec{Hypersphere{2000, 2}, 1}), 20).global_value;
  const bool sphere_ok = sphere >= 1.7 && sphere <= 2.3;
  report.detail(sphere_ok, fmt("2-sphere, n=2000, k=20: %.4f in [1.7, 2.3]", sphere));

  const double local = mle_local(std::vector<double>{1.0, 2.0}, 2);
  const bool local_ok = std::abs(local - 1.0 / std::log(2.0)) <= 1e-12;
  report.detail(local_ok, fmt("T=(1,2), k=2: %.15f vs 1/log 2", local));
  report.criterion(8, "MLE identities", scale && line_ok && sphere_ok && local_ok, seconds_since(start));
}

}  // namespace

int main() {
  Report report;
  exact_rank_recovery(report);
  mobius_reproduction(report);
  noise_filtering(report);
  noise_variance_estimation(report);
  cover_invariants(report);
  incremental_consistency(report);
  eigensolver_correctness(report);
  mle_identities(report);
  std::printf("SKIP 9 real-world datasets (not bundled, outside acceptance)\n");
  std::printf("%d criteria failed\n", report.failures());
  return report.failures() == 0 ? 0 : 1;
}
