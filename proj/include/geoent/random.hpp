// Seeded sampling: Haar states, Haar local unitaries and the two families of
// canonical states whose third qubit has a vanishing Bloch vector.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>

#include "geoent/state.hpp"

namespace geoent {

using Rng = std::mt19937_64;

/// Independent stream for sub-task `index` of a run seeded with `seed`.
inline Rng derive_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

inline Complex complex_gaussian(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

inline PureState haar_random_state(std::size_t n_qubits, Rng& rng) {
  std::vector<Complex> amps(std::size_t{1} << n_qubits);
  for (auto& a : amps) a = complex_gaussian(rng);
  return PureState(n_qubits, std::move(amps));
}

inline PureState haar_random_state(std::size_t n_qubits, std::uint64_t seed) {
  Rng rng = derive_rng(seed, 0);
  return haar_random_state(n_qubits, rng);
}

/// Haar-distributed U(2): Gram-Schmidt on a complex Ginibre matrix.
inline Eigen::Matrix2cd haar_unitary_2x2(Rng& rng) {
  Eigen::Vector2cd c0(complex_gaussian(rng), complex_gaussian(rng));
  Eigen::Vector2cd c1(complex_gaussian(rng), complex_gaussian(rng));
  c0.normalize();
  c1 -= c0 * c0.dot(c1);
  c1.normalize();
  Eigen::Matrix2cd u;
  u.col(0) = c0;
  u.col(1) = c1;
  return u;
}

inline LocalUnitary random_local_unitary(std::size_t n_qubits, Rng& rng) {
  LocalUnitary lu;
  lu.factors.reserve(n_qubits);
  for (std::size_t q = 0; q < n_qubits; ++q) lu.factors.push_back(haar_unitary_2x2(rng));
  return lu;
}

/// Uniform point on the unit sphere.
inline Eigen::Vector3d random_unit_vector(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::Vector3d v;
  do {
    v = {normal(rng), normal(rng), normal(rng)};
  } while (v.norm() < 1e-12);
  return v.normalized();
}

enum class ZeroBlochFamily {
  kQuadrilateral,  // h = 0, c^2 + d^2 = a^2 + b^2
  kHNonzero,       // c = 0, d^2 = a^2 + b^2 + h^2
};

inline std::string_view to_string(ZeroBlochFamily f) {
  return f == ZeroBlochFamily::kQuadrilateral ? "quadrilateral" : "h-nonzero";
}

/// Canonical parameters with b_C = 0, gamma = 0.
inline CanonicalParams sample_zero_bloch_manifold(ZeroBlochFamily family, Rng& rng) {
  const double half = std::sqrt(0.5);
  CanonicalParams p;
  if (family == ZeroBlochFamily::kQuadrilateral) {
    std::uniform_real_distribution<double> angle(0.0, std::numbers::pi / 2);
    const double alpha = angle(rng);
    const double beta = angle(rng);
    p.a = half * std::cos(alpha);
    p.b = half * std::sin(alpha);
    p.c = half * std::cos(beta);
    p.d = half * std::sin(beta);
  } else {
    // (a, b, h) uniform on the positive octant of the sphere of radius 1/sqrt(2).
    const Eigen::Vector3d v = random_unit_vector(rng).cwiseAbs();
    p.a = half * v.x();
    p.b = half * v.y();
    p.h = half * v.z();
    p.d = half;
  }
  return p;
}

inline CanonicalParams sample_zero_bloch_manifold(ZeroBlochFamily family, std::uint64_t seed) {
  Rng rng = derive_rng(seed, 0);
  return sample_zero_bloch_manifold(family, rng);
}

}  // namespace geoent
