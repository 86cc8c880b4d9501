#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "cpca/linalg.hpp"

namespace cpca {

/// All generators draw from std::mt19937_64 seeded with the given 64-bit seed.
using Rng = std::mt19937_64;

/// Band with `half_twists` half twists around a circle of radius `radius`:
///
///   x = (R + v cos(m u / 2)) cos u
///   y = (R + v cos(m u / 2)) sin u
///   z = v sin(m u / 2)
///
/// with u uniform on [0, 2 pi) and v uniform on [-half_width, half_width].
/// Sampling is uniform in (u, v), not in surface area.
struct Mobius {
  std::size_t n = 1200;
  unsigned half_twists = 10;
  double radius = 1.0;
  double half_width = 0.2;
};

/// Uniform on the unit d-sphere in R^(d+1).
struct Hypersphere {
  std::size_t n = 1000;
  std::size_t d = 2;
};

/// Uniform in [0, 1]^d.
struct Cube {
  std::size_t n = 1000;
  std::size_t d = 2;
};

/// x = t cos t, y = h, z = t sin t with t uniform on [1.5 pi, 4.5 pi], h on [0, 21].
struct SwissRoll {
  std::size_t n = 1000;
};

/// Uniform [0, 1]^d coordinates on a random d-dimensional affine subspace of R^ambient.
struct Subspace {
  std::size_t n = 1000;
  std::size_t d = 2;
  std::size_t ambient = 10;
};

struct ManifoldSpec {
  std::variant<Mobius, Hypersphere, Cube, SwissRoll, Subspace> kind;
  std::uint64_t seed = 0;
};

struct MobiusSample {
  PointSet points;
  std::vector<double> u;
  std::vector<double> v;
};

/// Mobius points together with the parameters each one was generated from.
MobiusSample generate_mobius(const Mobius& params, std::uint64_t seed);

/// Throws InvalidArgument for n = 0, d = 0, non-positive lengths, or an
/// ambient dimension smaller than d.
PointSet generate(const ManifoldSpec& spec);

struct CorruptionSpec {
  double noise_variance = 0.0;  // per coordinate
  std::size_t target_dim = 0;   // 0 keeps the source dimension
  std::uint64_t seed = 0;
};

/// Random isometric embedding into target_dim (orthonormal columns plus a
/// translation), then additive white Gaussian noise. The embedding is skipped
/// when target_dim equals the source dimension and noise when the variance is 0.
PointSet corrupt(const PointSet& points, const CorruptionSpec& spec);

/// rows x cols matrix with orthonormal columns (rows >= cols), from the QR
/// factorization of a Gaussian matrix.
Eigen::MatrixXd random_orthonormal(std::size_t rows, std::size_t cols, Rng& rng);

}  // namespace cpca
