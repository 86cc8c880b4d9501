#include "cpca/datagen.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/QR>

#include "cpca/error.hpp"

namespace cpca {

namespace {

void require(bool ok, const char* message) {
  if (!ok) throw InvalidArgument(message);
}

Eigen::Index rows_of(std::size_t n) { return static_cast<Eigen::Index>(n); }

PointSet hypersphere(const Hypersphere& p, Rng& rng) {
  require(p.n >= 1 && p.d >= 1, "hypersphere needs n >= 1 and d >= 1");
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd x(rows_of(p.n), rows_of(p.d + 1));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    double norm = 0.0;
    while (!(norm > 0.0)) {
      for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = normal(rng);
      norm = x.row(i).norm();
    }
    x.row(i) /= norm;
  }
  return PointSet(std::move(x));
}

Eigen::MatrixXd unit_cube(std::size_t n, std::size_t d, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::MatrixXd x(rows_of(n), rows_of(d));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = unit(rng);
  }
  return x;
}

PointSet swiss_roll(const SwissRoll& p, Rng& rng) {
  require(p.n >= 1, "swiss roll needs n >= 1");
  std::uniform_real_distribution<double> angle(1.5 * std::numbers::pi, 4.5 * std::numbers::pi);
  std::uniform_real_distribution<double> height(0.0, 21.0);
  Eigen::MatrixXd x(rows_of(p.n), 3);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double t = angle(rng);
    x(i, 0) = t * std::cos(t);
    x(i, 1) = height(rng);
    x(i, 2) = t * std::sin(t);
  }
  return PointSet(std::move(x));
}

Eigen::RowVectorXd random_offset(std::size_t dim, Rng& rng) {
  std::uniform_real_distribution<double> shift(-1.0, 1.0);
  Eigen::RowVectorXd t(rows_of(dim));
  for (Eigen::Index j = 0; j < t.size(); ++j) t(j) = shift(rng);
  return t;
}

}  // namespace

Eigen::MatrixXd random_orthonormal(std::size_t rows, std::size_t cols, Rng& rng) {
  require(rows >= cols && cols >= 1, "orthonormal map needs rows >= cols >= 1");
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd g(rows_of(rows), rows_of(cols));
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = normal(rng);
  }
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  return qr.householderQ() * Eigen::MatrixXd::Identity(rows_of(rows), rows_of(cols));
}

MobiusSample generate_mobius(const Mobius& p, std::uint64_t seed) {
  require(p.n >= 1, "mobius needs n >= 1");
  require(p.half_twists >= 1, "mobius needs at least one half twist");
  require(p.radius > 0.0 && p.half_width > 0.0, "mobius radius and width must be positive");

  Rng rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> across(-p.half_width, p.half_width);
  const double m = static_cast<double>(p.half_twists);

  Eigen::MatrixXd x(rows_of(p.n), 3);
  std::vector<double> us(p.n);
  std::vector<double> vs(p.n);
  for (std::size_t i = 0; i < p.n; ++i) {
    const double u = angle(rng);
    const double v = across(rng);
    const double ring = p.radius + v * std::cos(m * u / 2.0);
    const auto r = static_cast<Eigen::Index>(i);
    x(r, 0) = ring * std::cos(u);
    x(r, 1) = ring * std::sin(u);
    x(r, 2) = v * std::sin(m * u / 2.0);
    us[i] = u;
    vs[i] = v;
  }
  return {PointSet(std::move(x)), std::move(us), std::move(vs)};
}

PointSet generate(const ManifoldSpec& spec) {
  Rng rng(spec.seed);
  return std::visit(
      [&](const auto& kind) -> PointSet {
        using Kind = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<Kind, Mobius>) {
          return generate_mobius(kind, spec.seed).points;
        } else if constexpr (std::is_same_v<Kind, Hypersphere>) {
          return hypersphere(kind, rng);
        } else if constexpr (std::is_same_v<Kind, Cube>) {
          require(kind.n >= 1 && kind.d >= 1, "cube needs n >= 1 and d >= 1");
          return PointSet(unit_cube(kind.n, kind.d, rng));
        } else if constexpr (std::is_same_v<Kind, SwissRoll>) {
          return swiss_roll(kind, rng);
        } else {
          require(kind.n >= 1 && kind.d >= 1, "subspace needs n >= 1 and d >= 1");
          require(kind.ambient >= kind.d, "subspace needs ambient >= d");
          const Eigen::MatrixXd coeffs = unit_cube(kind.n, kind.d, rng);
          const Eigen::MatrixXd basis = random_orthonormal(kind.ambient, kind.d, rng);
          const Eigen::RowVectorXd offset = random_offset(kind.ambient, rng);
          return PointSet((coeffs * basis.transpose()).rowwise() + offset);
        }
      },
      spec.kind);
}

PointSet corrupt(const PointSet& points, const CorruptionSpec& spec) {
  require(spec.noise_variance >= 0.0 && std::isfinite(spec.noise_variance),
          "noise variance must be a non-negative number");
  const std::size_t target = spec.target_dim == 0 ? points.dim() : spec.target_dim;
  if (target < points.dim()) {
    throw InvalidArgument("target dimension is smaller than the source dimension");
  }

  Rng rng(spec.seed);
  Eigen::MatrixXd x = points.coords();
  if (target != points.dim()) {
    const Eigen::MatrixXd basis = random_orthonormal(target, points.dim(), rng);
    const Eigen::RowVectorXd offset = random_offset(target, rng);
    x = (x * basis.transpose()).rowwise() + offset;
  }
  if (spec.noise_variance > 0.0) {
    std::normal_distribution<double> noise(0.0, std::sqrt(spec.noise_variance));
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) += noise(rng);
    }
  }
  return PointSet(std::move(x));
}

}  // namespace cpca
