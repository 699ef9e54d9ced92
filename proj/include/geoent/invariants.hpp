// Local-unitary invariants of pure three-qubit states: Bloch vectors, the
// two-qubit correlation matrix G, the sextic invariant t and the three-tangle.

#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

#include "geoent/state.hpp"

#ifndef GEOENT_CROSS_CHECK
#ifdef NDEBUG
#define GEOENT_CROSS_CHECK 0
#else
#define GEOENT_CROSS_CHECK 1
#endif
#endif

namespace geoent {

using BlochVector = Eigen::Vector3d;
using CorrelationMatrix = Eigen::Matrix3d;

/// Tolerance for the trace-form vs Bloch-form agreement of t.
inline constexpr double kCrossCheckTolerance = 1e-10;

/// sigma_x, sigma_y, sigma_z with sigma_y = [[0, -i], [i, 0]].
inline const std::array<Eigen::Matrix2cd, 3>& pauli() {
  static const std::array<Eigen::Matrix2cd, 3> p = [] {
    using namespace std::complex_literals;
    std::array<Eigen::Matrix2cd, 3> m;
    m[0] << 0.0, 1.0, 1.0, 0.0;
    m[1] << 0.0, -1i, 1i, 0.0;
    m[2] << 1.0, 0.0, 0.0, -1.0;
    return m;
  }();
  return p;
}

inline BlochVector bloch_vector(const QubitDensity& rho) {
  const auto& s = pauli();
  return {(rho * s[0]).trace().real(), (rho * s[1]).trace().real(), (rho * s[2]).trace().real()};
}

inline BlochVector bloch_vector(const PureState& s, std::size_t q) { return bloch_vector(partial_trace_single(s, q)); }

/// G_ij = tr(rho_{q1 q2} sigma_i (x) sigma_j)
inline CorrelationMatrix correlation_matrix(const PairDensity& rho) {
  const auto& s = pauli();
  CorrelationMatrix g;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const PairDensity op = Eigen::kroneckerProduct(s[i], s[j]);
      g(i, j) = (rho * op).trace().real();
    }
  }
  return g;
}

inline CorrelationMatrix correlation_matrix(const PureState& s, std::size_t q1, std::size_t q2) {
  return correlation_matrix(partial_trace_pair(s, q1, q2));
}

inline void require_three_qubits(const PureState& s, const char* what) {
  if (s.n_qubits() != 3) {
    throw std::invalid_argument(std::string(what) + " is defined for 3-qubit states, got " +
                                std::to_string(s.n_qubits()) + " qubits");
  }
}

/// t = 3 tr[rho_AB (rho_A (x) rho_B)] - tr rho_A^3 - tr rho_B^3 - 1/4
inline double sextic_t_trace(const PureState& s) {
  require_three_qubits(s, "sextic invariant");
  const QubitDensity ra = partial_trace_single(s, 0);
  const QubitDensity rb = partial_trace_single(s, 1);
  const PairDensity rab = partial_trace_pair(s, 0, 1);
  const PairDensity prod = Eigen::kroneckerProduct(ra, rb);
  const double mixed = (rab * prod).trace().real();
  const double cube_a = (ra * ra * ra).trace().real();
  const double cube_b = (rb * rb * rb).trace().real();
  return 3.0 * mixed - cube_a - cube_b - 0.25;
}

/// t = (3/4) b_A . (G b_B)
inline double sextic_t_bloch(const PureState& s) {
  require_three_qubits(s, "sextic invariant");
  return 0.75 * bloch_vector(s, 0).dot(correlation_matrix(s, 0, 1) * bloch_vector(s, 1));
}

/// Three-tangle from the 2x2x2 hyperdeterminant, scaled so GHZ gives 1.
inline double three_tangle(const PureState& s) {
  require_three_qubits(s, "three-tangle");
  auto x = [&](int i, int j, int k) { return s[static_cast<std::size_t>(4 * i + 2 * j + k)]; };
  const Complex d1 = x(0, 0, 0) * x(0, 0, 0) * x(1, 1, 1) * x(1, 1, 1) +
                     x(0, 0, 1) * x(0, 0, 1) * x(1, 1, 0) * x(1, 1, 0) +
                     x(0, 1, 0) * x(0, 1, 0) * x(1, 0, 1) * x(1, 0, 1) +
                     x(1, 0, 0) * x(1, 0, 0) * x(0, 1, 1) * x(0, 1, 1);
  const Complex d2 = x(0, 0, 0) * x(1, 1, 1) * x(0, 1, 1) * x(1, 0, 0) +
                     x(0, 0, 0) * x(1, 1, 1) * x(1, 0, 1) * x(0, 1, 0) +
                     x(0, 0, 0) * x(1, 1, 1) * x(1, 1, 0) * x(0, 0, 1) +
                     x(0, 1, 1) * x(1, 0, 0) * x(1, 0, 1) * x(0, 1, 0) +
                     x(0, 1, 1) * x(1, 0, 0) * x(1, 1, 0) * x(0, 0, 1) +
                     x(1, 0, 1) * x(0, 1, 0) * x(1, 1, 0) * x(0, 0, 1);
  const Complex d3 = x(0, 0, 0) * x(1, 1, 0) * x(1, 0, 1) * x(0, 1, 1) +
                     x(1, 1, 1) * x(0, 0, 1) * x(0, 1, 0) * x(1, 0, 0);
  return 4.0 * std::abs(d1 - 2.0 * d2 + 4.0 * d3);
}

/// tau = 4 d sqrt((d h^2 - 4abc)^2 + 16 abcd h^2 cos^2 gamma)
inline double three_tangle_canonical(const CanonicalParams& p) {
  p.validate();
  const double lin = p.d * p.h * p.h - 4.0 * p.a * p.b * p.c;
  const double cg = std::cos(p.gamma);
  return 4.0 * p.d * std::sqrt(lin * lin + 16.0 * p.a * p.b * p.c * p.d * p.h * p.h * cg * cg);
}

struct InvariantSet {
  double b_a = 0.0;
  double b_b = 0.0;
  double b_c = 0.0;
  double t = 0.0;
  double tau = 0.0;

  std::array<double, 5> as_array() const { return {b_a, b_b, b_c, t, tau}; }
};

/// Largest componentwise difference.
inline double max_abs_difference(const InvariantSet& x, const InvariantSet& y) {
  const auto u = x.as_array();
  const auto v = y.as_array();
  double m = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) m = std::max(m, std::abs(u[i] - v[i]));
  return m;
}

/// Thrown when two independent formulas for the same invariant disagree.
class CrossCheckError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline InvariantSet invariant_set(const PureState& s, bool cross_check = GEOENT_CROSS_CHECK) {
  require_three_qubits(s, "invariant set");
  InvariantSet inv;
  inv.b_a = bloch_vector(s, 0).norm();
  inv.b_b = bloch_vector(s, 1).norm();
  inv.b_c = bloch_vector(s, 2).norm();
  inv.t = sextic_t_trace(s);
  inv.tau = three_tangle(s);
  if (cross_check) {
    const double t_bloch = sextic_t_bloch(s);
    if (std::abs(inv.t - t_bloch) > kCrossCheckTolerance) {
      throw CrossCheckError("sextic invariant: trace form " + std::to_string(inv.t) + " vs Bloch form " +
                            std::to_string(t_bloch));
    }
  }
  return inv;
}

}  // namespace geoent
