#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace cpca {

/// N points in D ambient dimensions, stored one point per row.
///
/// Construction validates the invariants: at least one point, at least one
/// coordinate, and every coordinate finite.
class PointSet {
 public:
  explicit PointSet(Eigen::MatrixXd coords);

  static PointSet from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const { return static_cast<std::size_t>(coords_.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(coords_.cols()); }

  auto point(std::size_t i) const { return coords_.row(static_cast<Eigen::Index>(i)); }
  const Eigen::MatrixXd& coords() const { return coords_; }

  /// Points at the given indices, in the given order.
  PointSet subset(std::span<const std::size_t> indices) const;

 private:
  Eigen::MatrixXd coords_;
};

/// Symmetric N x N matrix of pairwise Euclidean distances.
class DistanceMatrix {
 public:
  explicit DistanceMatrix(Eigen::MatrixXd entries);

  std::size_t size() const { return static_cast<std::size_t>(entries_.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  const Eigen::MatrixXd& entries() const { return entries_; }

 private:
  Eigen::MatrixXd entries_;
};

DistanceMatrix distance_matrix(const PointSet& points);

/// Descending, non-negative eigenvalues of a covariance matrix.
///
/// The length is min(subset_size, ambient dimension): directions beyond that
/// carry zero variance by construction and are not stored.
struct Spectrum {
  std::vector<double> eigenvalues;
  std::size_t subset_size = 0;

  std::size_t size() const { return eigenvalues.size(); }
  double total() const;
};

struct SymmetricEigen {
  std::vector<double> values;  // descending
  Eigen::MatrixXd vectors;     // column j pairs with values[j]
};

/// Cyclic Jacobi eigendecomposition of a real symmetric matrix.
///
/// Eigenvalues come back in descending order. Each eigenvector is signed so
/// that its largest-magnitude component is positive (first such component on
/// ties). Throws DataError for non-square, non-finite, or non-symmetric input
/// (asymmetry above 1e-10 relative to the largest entry).
SymmetricEigen eigendecompose_symmetric(const Eigen::MatrixXd& matrix);

enum class SpectrumPath {
  automatic,  // Gram when D > n, direct otherwise
  direct,     // D x D covariance
  gram,       // n x n inner products of centered points
};

/// Eigenvalues of C = (1/N) sum (x_i - mean)(x_i - mean)^T.
///
/// Values within 1e-10 * lambda_1 of zero are clamped to 0; anything more
/// negative raises NumericalError.
Spectrum covariance_spectrum(const PointSet& points,
                             SpectrumPath path = SpectrumPath::automatic);

/// (1/N) sum ||x_i - mean||^2, the trace of the covariance.
double total_variance(const PointSet& points);

}  // namespace cpca
