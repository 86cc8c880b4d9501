#include "cpca/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "cpca/error.hpp"

namespace cpca {

namespace {

constexpr double kSymmetryTolerance = 1e-10;
constexpr double kClampTolerance = 1e-10;
constexpr int kMaxSweeps = 100;

Eigen::MatrixXd centered(const Eigen::MatrixXd& coords) {
  const Eigen::RowVectorXd mean = coords.colwise().mean();
  return coords.rowwise() - mean;
}

// Zero out eigenvalues that are indistinguishable from rounding noise.
// The floor term covers point sets whose true spread is zero, where lambda_1
// itself is pure rounding from the centering step.
std::vector<double> clamp_eigenvalues(std::vector<double> values,
                                      const Eigen::MatrixXd& coords) {
  const double top = values.empty() ? 0.0 : std::max(values.front(), 0.0);
  const double unit = 64.0 * std::numeric_limits<double>::epsilon() *
                      coords.cwiseAbs().maxCoeff();
  const double floor = unit * unit * static_cast<double>(coords.cols());
  const double tol = std::max(kClampTolerance * top, floor);
  for (double& v : values) {
    if (std::abs(v) < tol) {
      v = 0.0;
    } else if (v < 0.0) {
      throw NumericalError("covariance eigenvalue " + std::to_string(v) +
                           " is negative beyond the clamp tolerance");
    }
  }
  return values;
}

}  // namespace

PointSet::PointSet(Eigen::MatrixXd coords) : coords_(std::move(coords)) {
  if (coords_.rows() < 1) throw DataError("empty dataset");
  if (coords_.cols() < 1) throw DataError("points must have at least one coordinate");
  if (!coords_.allFinite()) throw DataError("point coordinates must be finite");
}

PointSet PointSet::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw DataError("empty dataset");
  const std::size_t dim = rows.front().size();
  Eigen::MatrixXd coords(static_cast<Eigen::Index>(rows.size()),
                         static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != dim) {
      throw DataError("point " + std::to_string(i) + " has " +
                      std::to_string(rows[i].size()) + " coordinates, expected " +
                      std::to_string(dim));
    }
    for (std::size_t j = 0; j < dim; ++j) {
      coords(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return PointSet(std::move(coords));
}

PointSet PointSet::subset(std::span<const std::size_t> indices) const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(indices.size()), coords_.cols());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    if (indices[r] >= size()) throw InvalidArgument("subset index out of range");
    out.row(static_cast<Eigen::Index>(r)) = coords_.row(static_cast<Eigen::Index>(indices[r]));
  }
  return PointSet(std::move(out));
}

DistanceMatrix::DistanceMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    throw InvalidArgument("distance matrix must be square");
  }
}

DistanceMatrix distance_matrix(const PointSet& points) {
  const auto n = static_cast<Eigen::Index>(points.size());
  const Eigen::MatrixXd& x = points.coords();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double dist = (x.row(i) - x.row(j)).norm();
      d(i, j) = dist;
      d(j, i) = dist;
    }
  }
  return DistanceMatrix(std::move(d));
}

double Spectrum::total() const {
  return std::accumulate(eigenvalues.begin(), eigenvalues.end(), 0.0);
}

SymmetricEigen eigendecompose_symmetric(const Eigen::MatrixXd& matrix) {
  if (matrix.rows() != matrix.cols()) throw DataError("matrix must be square");
  if (matrix.rows() == 0) throw DataError("matrix is empty");
  if (!matrix.allFinite()) throw DataError("matrix has non-finite entries");
  const Eigen::Index n = matrix.rows();
  const double scale = matrix.cwiseAbs().maxCoeff();
  if ((matrix - matrix.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance * scale) {
    throw DataError("matrix is not symmetric");
  }

  Eigen::MatrixXd a = 0.5 * (matrix + matrix.transpose());
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) off += std::abs(a(p, q));
    }
    if (off == 0.0) break;

    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        const double g = 100.0 * std::abs(apq);
        // Once past the first sweeps, an entry negligible against both
        // diagonals is set to zero rather than rotated.
        if (sweep > 3 && std::abs(a(p, p)) + g == std::abs(a(p, p)) &&
            std::abs(a(q, q)) + g == std::abs(a(q, q))) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        if (apq == 0.0) continue;

        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
    if (sweep == kMaxSweeps - 1) {
      throw NumericalError("Jacobi eigensolver did not converge");
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index l, Eigen::Index r) { return a(l, l) > a(r, r); });

  SymmetricEigen out;
  out.values.reserve(static_cast<std::size_t>(n));
  out.vectors.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index src = order[static_cast<std::size_t>(j)];
    out.values.push_back(a(src, src));
    Eigen::VectorXd col = v.col(src);
    Eigen::Index pivot = 0;
    for (Eigen::Index k = 1; k < n; ++k) {
      if (std::abs(col(k)) > std::abs(col(pivot))) pivot = k;
    }
    if (col(pivot) < 0.0) col = -col;
    out.vectors.col(j) = col;
  }
  return out;
}

Spectrum covariance_spectrum(const PointSet& points, SpectrumPath path) {
  const std::size_t n = points.size();
  const std::size_t dim = points.dim();
  if (path == SpectrumPath::automatic) {
    path = dim > n ? SpectrumPath::gram : SpectrumPath::direct;
  }
  const Eigen::MatrixXd x = centered(points.coords());
  const double inv_n = 1.0 / static_cast<double>(n);

  // The nonzero eigenvalues of X^T X and X X^T coincide.
  const Eigen::MatrixXd product = path == SpectrumPath::gram
                                      ? Eigen::MatrixXd(inv_n * (x * x.transpose()))
                                      : Eigen::MatrixXd(inv_n * (x.transpose() * x));
  std::vector<double> values = eigendecompose_symmetric(product).values;
  values.resize(std::min(n, dim));

  Spectrum spectrum;
  spectrum.eigenvalues = clamp_eigenvalues(std::move(values), points.coords());
  spectrum.subset_size = n;
  return spectrum;
}

double total_variance(const PointSet& points) {
  return centered(points.coords()).squaredNorm() / static_cast<double>(points.size());
}

}  // namespace cpca
