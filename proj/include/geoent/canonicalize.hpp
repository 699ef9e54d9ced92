// Numerical reduction of a three-qubit state to the canonical form
//   a|011> + b|101> + c|110> + d|000> + e^{i gamma} h|111>.
//
// If q_A q_B q_C is a stationary point of |<psi|q>|, the components of psi
// along q_A^perp q_B q_C, q_A q_B^perp q_C and q_A q_B q_C^perp vanish. Rotating
// each q_k to |0> therefore zeroes amplitudes 100, 010 and 001; diagonal
// phases on |1> then make amplitudes 000, 011, 101, 110 real and
// nonnegative, leaving gamma on 111. The stationary point used is the
// global maximizer, so d equals the maximal product overlap g.

#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include "geoent/overlap.hpp"
#include "geoent/state.hpp"

namespace geoent {

inline constexpr double kCanonicalResidualTolerance = 1e-9;

struct CanonicalForm {
  CanonicalParams params;
  LocalUnitary transform;  // transform applied to the input gives canonical_to_state(params)
  double residual = 0.0;
};

class CanonicalizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sum of |amp|^2 over indices 1, 2, 4 plus the distance of amplitudes
/// 0, 3, 5, 6 from the nonnegative reals.
inline double canonical_residual(const PureState& s) {
  require_three_qubits(s, "canonical residual");
  double r = std::norm(s[1]) + std::norm(s[2]) + std::norm(s[4]);
  for (std::size_t i : {0, 3, 5, 6}) r += std::norm(s[i] - std::abs(s[i]));
  return r;
}

namespace detail {

/// Unitary taking spinor q to |0>.
inline Eigen::Matrix2cd rotate_to_zero(const Spinor& q) {
  Eigen::Matrix2cd u;
  u << std::conj(q(0)), std::conj(q(1)), -q(1), q(0);
  return u;
}

inline double wrap_angle(double x) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  x = std::fmod(x, two_pi);
  if (x <= -std::numbers::pi) x += two_pi;
  if (x > std::numbers::pi) x -= two_pi;
  return x;
}

inline CanonicalForm canonical_form_from_product(const PureState& s, const std::vector<Spinor>& product) {
  LocalUnitary lu;
  for (const auto& q : product) lu.factors.push_back(rotate_to_zero(q));
  const PureState rotated = apply_local_unitary(s, lu);

  // Phases: global theta_0 on everything, phi_k on |1> of qubit k.
  const double theta0 = std::arg(rotated[0b000]);
  const double p_a = std::arg(rotated[0b011]) - theta0;  // carries phi_B + phi_C
  const double p_b = std::arg(rotated[0b101]) - theta0;  // phi_A + phi_C
  const double p_c = std::arg(rotated[0b110]) - theta0;  // phi_A + phi_B
  std::array<double, 3> phi = {(p_a - p_b - p_c) / 2.0, (p_b - p_a - p_c) / 2.0, (p_c - p_a - p_b) / 2.0};

  double gamma = wrap_angle(std::arg(rotated[0b111]) - theta0 + phi[0] + phi[1] + phi[2]);
  if (gamma <= -std::numbers::pi / 2 || gamma > std::numbers::pi / 2) {
    // Shifting every phi_k by pi leaves the pairwise sums unchanged mod 2 pi
    // and moves gamma by pi.
    for (auto& p : phi) p += std::numbers::pi;
    gamma = wrap_angle(gamma + std::numbers::pi);
  }

  for (std::size_t k = 0; k < 3; ++k) {
    Eigen::Matrix2cd phase = Eigen::Matrix2cd::Identity();
    phase(1, 1) = std::polar(1.0, phi[k]);
    lu.factors[k] = phase * lu.factors[k];
  }
  lu.factors[0] *= std::polar(1.0, -theta0);

  const PureState out = apply_local_unitary(s, lu);
  CanonicalForm form;
  form.transform = std::move(lu);
  form.residual = canonical_residual(out);
  auto& p = form.params;
  p.d = std::abs(out[0b000]);
  p.a = std::abs(out[0b011]);
  p.b = std::abs(out[0b101]);
  p.c = std::abs(out[0b110]);
  p.h = std::abs(out[0b111]);
  const double norm = std::sqrt(p.norm_squared());
  p.a /= norm;
  p.b /= norm;
  p.c /= norm;
  p.d /= norm;
  p.h /= norm;
  p.gamma = p.h > 1e-12 ? gamma : 0.0;
  return form;
}

/// Lexicographic (d, h, a, b, c) comparison with a tolerance for ties.
inline bool canonical_less(const CanonicalParams& x, const CanonicalParams& y, double tol) {
  const std::array<double, 5> u = {x.d, x.h, x.a, x.b, x.c};
  const std::array<double, 5> v = {y.d, y.h, y.a, y.b, y.c};
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] < v[i] - tol) return true;
    if (u[i] > v[i] + tol) return false;
  }
  return false;
}

}  // namespace detail

/// Default multi-start budget for canonicalization.
inline SolverConfig canonicalize_config(std::uint64_t seed = 0) {
  SolverConfig cfg;
  cfg.restarts = 32;
  cfg.seed = seed;
  return cfg;
}

/// Canonical parameters and the local unitary reaching them. Among global
/// maximizers of the product overlap the lexicographically largest
/// (d, h, a, b, c) is returned. Throws CanonicalizationError if no start
/// reaches the residual tolerance.
inline CanonicalForm canonicalize(const PureState& s, const SolverConfig& cfg = canonicalize_config()) {
  require_three_qubits(s, "canonicalize");
  const auto outcomes = solve_all_starts(s, cfg);
  double best_g2 = 0.0;
  for (const auto& o : outcomes) best_g2 = std::max(best_g2, o.g_squared);

  std::optional<CanonicalForm> chosen;
  double smallest_residual = std::numeric_limits<double>::infinity();
  for (const auto& o : outcomes) {
    if (o.g_squared < best_g2 - 1e-9) continue;
    CanonicalForm form = detail::canonical_form_from_product(s, o.spinors);
    smallest_residual = std::min(smallest_residual, form.residual);
    if (form.residual > kCanonicalResidualTolerance) continue;
    if (!chosen || detail::canonical_less(chosen->params, form.params, 1e-9)) chosen = std::move(form);
  }
  if (!chosen) {
    throw CanonicalizationError("canonicalization did not reach residual " +
                                std::to_string(kCanonicalResidualTolerance) + " after " +
                                std::to_string(outcomes.size()) + " starts (best " +
                                std::to_string(smallest_residual) + ")");
  }
  return *chosen;
}

}  // namespace geoent
