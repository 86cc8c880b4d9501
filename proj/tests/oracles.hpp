#pragma once

// Independent reference computations for tests. Nothing here calls into the
// library's numerical paths.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace cpca::testing {

inline Eigen::MatrixXd random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed,
                                     double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, scale);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = normal(rng);
  }
  return m;
}

inline Eigen::MatrixXd random_symmetric(std::size_t n, std::uint64_t seed) {
  const Eigen::MatrixXd g = random_matrix(n, n, seed);
  return 0.5 * (g + g.transpose());
}

/// Naive double-loop distances, each pair computed from scratch.
inline double naive_distance(const Eigen::MatrixXd& x, Eigen::Index i, Eigen::Index j) {
  double s = 0.0;
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    const double d = x(i, c) - x(j, c);
    s += d * d;
  }
  return std::sqrt(s);
}

/// Descending eigenvalues of the D x D covariance via Eigen's dense solver.
inline std::vector<double> dense_covariance_spectrum(const Eigen::MatrixXd& x) {
  const Eigen::RowVectorXd mean = x.colwise().mean();
  const Eigen::MatrixXd c = x.rowwise() - mean;
  const Eigen::MatrixXd cov = (c.transpose() * c) / static_cast<double>(x.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  std::vector<double> values(solver.eigenvalues().data(),
                             solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(values.rbegin(), values.rend());
  return values;
}

/// Full sort of all other points by (distance, index), first k kept.
inline std::vector<std::size_t> brute_force_knn(const Eigen::MatrixXd& x, std::size_t i,
                                                std::size_t k) {
  std::vector<std::pair<double, std::size_t>> all;
  for (Eigen::Index j = 0; j < x.rows(); ++j) {
    if (static_cast<std::size_t>(j) == i) continue;
    all.emplace_back(naive_distance(x, static_cast<Eigen::Index>(i), j),
                     static_cast<std::size_t>(j));
  }
  std::sort(all.begin(), all.end());
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < k; ++r) out.push_back(all[r].second);
  return out;
}

/// Textbook Levina-Bickel local estimate, written independently.
inline double mle_formula(const std::vector<double>& t) {
  const std::size_t k = t.size();
  double s = 0.0;
  for (std::size_t j = 0; j + 1 < k; ++j) s += std::log(t[k - 1] / t[j]);
  return 1.0 / (s / static_cast<double>(k - 1));
}

inline Eigen::MatrixXd random_rotation(std::size_t d, std::uint64_t seed) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(random_matrix(d, d, seed));
  return qr.householderQ();
}

}  // namespace cpca::testing
