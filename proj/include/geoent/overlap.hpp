// Maximal product overlap g^2 = max |<psi|q_1 ... q_n>|^2 by multi-start
// alternating rank-1 ascent, plus the two-qubit-marginal ("quarter form")
// objective and its stationarity conditions for three-qubit states.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "geoent/invariants.hpp"
#include "geoent/random.hpp"
#include "geoent/state.hpp"

namespace geoent {

struct SolverConfig {
  int restarts = 64;
  int max_iterations = 500;
  double tolerance = 1e-13;  // on the per-sweep change of g^2
  std::uint64_t seed = 0;

  void validate() const {
    if (restarts <= 0 || max_iterations <= 0 || !(tolerance > 0.0)) {
      throw std::invalid_argument("solver restarts, max_iterations and tolerance must be positive");
    }
  }
};

struct LagrangeMultipliers {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
};

struct OverlapResult {
  double g_squared = 0.0;
  ProductState product;
  std::optional<LagrangeMultipliers> lagrange;  // three qubits only, both > 0
  int restarts_used = 0;
  int iterations = 0;  // sweeps of the winning start
  bool converged = false;
  std::optional<double> stationarity_residual;  // three qubits only
};

// ---------------------------------------------------------------------------
// Bloch sphere <-> spinor

inline void require_unit(const Eigen::Vector3d& v, const char* what, double tol = 1e-10) {
  if (std::abs(v.norm() - 1.0) > tol) throw std::invalid_argument(std::string(what) + " must be a unit vector");
}

/// Spinor with the given Bloch vector; the |0> component is real and nonnegative.
inline Spinor bloch_to_spinor(const Eigen::Vector3d& v) {
  require_unit(v, "Bloch vector");
  const Eigen::Vector3d u = v.normalized();
  const double up = std::sqrt(std::max(0.0, (1.0 + u.z()) / 2.0));
  const double down = std::sqrt(std::max(0.0, (1.0 - u.z()) / 2.0));
  const double rho = std::hypot(u.x(), u.y());
  const Complex phase = rho > 0.0 ? Complex(u.x() / rho, u.y() / rho) : Complex(1.0, 0.0);
  return Spinor(up, phase * down);
}

inline Eigen::Vector3d spinor_to_bloch(const Spinor& q) {
  const Complex cross = std::conj(q(0)) * q(1);
  return {2.0 * cross.real(), 2.0 * cross.imag(), std::norm(q(0)) - std::norm(q(1))};
}

/// E_g = -2 ln g = -ln g^2
inline double geometric_measure(double g_squared) {
  if (!(g_squared > 0.0)) throw std::domain_error("geometric measure needs g^2 > 0");
  return -std::log(g_squared);
}

// ---------------------------------------------------------------------------
// Alternating ascent

/// One run of the alternating (higher-order power) iteration from a fixed
/// start. Each update replaces one spinor by the normalized contraction of
/// psi with the conjugates of all other spinors, so |<psi|q>| never decreases.
class AlternatingAscent {
 public:
  AlternatingAscent(const PureState& s, std::vector<Spinor> start) : state_(&s), spinors_(std::move(start)) {
    if (spinors_.size() != s.n_qubits()) throw std::invalid_argument("start has wrong qubit count");
    for (auto& q : spinors_) q.normalize();
    g_squared_ = current_overlap_squared();
  }

  /// Updates every qubit once; returns g^2 afterwards.
  double sweep() {
    for (std::size_t k = 0; k < spinors_.size(); ++k) update(k);
    return g_squared_;
  }

  double g_squared() const { return g_squared_; }
  const std::vector<Spinor>& spinors() const { return spinors_; }

  /// Contraction of psi against every spinor except qubit k.
  Spinor contraction(std::size_t k) const {
    const PureState& s = *state_;
    const std::size_t n = s.n_qubits();
    Spinor v = Spinor::Zero();
    for (std::size_t i = 0; i < s.dim(); ++i) {
      Complex w = s[i];
      for (std::size_t l = 0; l < n; ++l) {
        if (l != k) w *= std::conj(spinors_[l](static_cast<Eigen::Index>(qubit_bit(i, n, l))));
      }
      v(static_cast<Eigen::Index>(qubit_bit(i, n, k))) += w;
    }
    return v;
  }

  /// max_k |v_k - (q_k^dagger v_k) q_k|, zero exactly at stationary points.
  double tangent_residual() const {
    double r = 0.0;
    for (std::size_t k = 0; k < spinors_.size(); ++k) {
      const Spinor v = contraction(k);
      r = std::max(r, (v - spinors_[k] * spinors_[k].dot(v)).norm());
    }
    return r;
  }

 private:
  void update(std::size_t k) {
    const Spinor v = contraction(k);
    const double len = v.norm();
    if (len > 0.0) {
      spinors_[k] = v / len;
      g_squared_ = len * len;
    }
  }

  double current_overlap_squared() const {
    const Spinor v = contraction(0);
    return std::norm(spinors_[0].dot(v));
  }

  const PureState* state_;
  std::vector<Spinor> spinors_;
  double g_squared_ = 0.0;
};

struct AscentOutcome {
  double g_squared = 0.0;
  std::vector<Spinor> spinors;
  int iterations = 0;
  bool converged = false;
};

inline AscentOutcome run_ascent(const PureState& s, std::vector<Spinor> start, const SolverConfig& cfg) {
  AlternatingAscent ascent(s, std::move(start));
  AscentOutcome out;
  double previous = ascent.g_squared();
  for (int it = 1; it <= cfg.max_iterations; ++it) {
    const double now = ascent.sweep();
    out.iterations = it;
    if (now - previous < cfg.tolerance) {
      out.converged = true;
      break;
    }
    previous = now;
  }
  out.g_squared = ascent.g_squared();
  out.spinors = ascent.spinors();
  return out;
}

/// Start 0 is the computational basis state of the largest-magnitude
/// amplitude; starts 1..restarts use Haar-random spinors, each from its own
/// sub-seed so results do not depend on execution order.
inline std::vector<std::vector<Spinor>> solver_starts(const PureState& s, const SolverConfig& cfg) {
  const std::size_t n = s.n_qubits();
  std::vector<std::vector<Spinor>> starts;
  starts.reserve(static_cast<std::size_t>(cfg.restarts) + 1);

  std::size_t best = 0;
  for (std::size_t i = 1; i < s.dim(); ++i) {
    if (std::abs(s[i]) > std::abs(s[best])) best = i;
  }
  std::vector<Spinor> basis(n);
  for (std::size_t q = 0; q < n; ++q) basis[q] = qubit_bit(best, n, q) ? Spinor(0.0, 1.0) : Spinor(1.0, 0.0);
  starts.push_back(std::move(basis));

  for (int r = 0; r < cfg.restarts; ++r) {
    Rng rng = derive_rng(cfg.seed, static_cast<std::uint64_t>(r));
    std::vector<Spinor> start(n);
    for (auto& q : start) q = bloch_to_spinor(random_unit_vector(rng));
    starts.push_back(std::move(start));
  }
  return starts;
}

/// Every start's end point, in start order.
inline std::vector<AscentOutcome> run_restarts(const PureState& s, const SolverConfig& cfg) {
  cfg.validate();
  if (s.n_qubits() < 2) throw std::invalid_argument("product overlap needs at least 2 qubits");
  std::vector<AscentOutcome> outcomes;
  for (auto& start : solver_starts(s, cfg)) outcomes.push_back(run_ascent(s, std::move(start), cfg));
  return outcomes;
}

// ---------------------------------------------------------------------------
// Quarter form and stationarity (three qubits)

/// Bloch vectors of qubits A, B and their correlation matrix.
struct MarginalGeometry {
  BlochVector b_a;
  BlochVector b_b;
  CorrelationMatrix g;

  static MarginalGeometry of(const PureState& s) {
    require_three_qubits(s, "marginal geometry");
    return {bloch_vector(s, 0), bloch_vector(s, 1), correlation_matrix(s, 0, 1)};
  }
};

/// (1/4)[1 + x.b_A + y.b_B + x.(G y)]: the squared overlap reachable with
/// Bloch vectors x, y on qubits A, B after optimizing qubit C.
inline double quarter_form(const Eigen::Vector3d& x, const Eigen::Vector3d& y, const BlochVector& b_a,
                           const BlochVector& b_b, const CorrelationMatrix& g) {
  require_unit(x, "x");
  require_unit(y, "y");
  return 0.25 * (1.0 + x.dot(b_a) + y.dot(b_b) + x.dot(g * y));
}

/// |G y + b_A - lambda1 x| + |G^T x + b_B - lambda2 y|
inline double stationarity_residual(const MarginalGeometry& m, const Eigen::Vector3d& x, const Eigen::Vector3d& y,
                                    double lambda1, double lambda2) {
  return (m.g * y + m.b_a - lambda1 * x).norm() + (m.g.transpose() * x + m.b_b - lambda2 * y).norm();
}

inline double stationarity_residual(const PureState& s, const Eigen::Vector3d& x, const Eigen::Vector3d& y,
                                    double lambda1, double lambda2) {
  require_unit(x, "x");
  require_unit(y, "y");
  return stationarity_residual(MarginalGeometry::of(s), x, y, lambda1, lambda2);
}

/// Multipliers by scalar projection: lambda1 = x.(G y + b_A), lambda2 = y.(G^T x + b_B).
inline LagrangeMultipliers lagrange_multipliers(const MarginalGeometry& m, const Eigen::Vector3d& x,
                                                const Eigen::Vector3d& y) {
  return {x.dot(m.g * y + m.b_a), y.dot(m.g.transpose() * x + m.b_b)};
}

// ---------------------------------------------------------------------------

namespace detail {

inline Spinor orthogonal_spinor(const Spinor& q) { return Spinor(-std::conj(q(1)), std::conj(q(0))); }

/// sum_i psi_i prod_k conj(slot_k(i_k))
inline Complex contract_all(const PureState& s, const std::vector<Spinor>& slots) {
  const std::size_t n = s.n_qubits();
  Complex acc = 0.0;
  for (std::size_t i = 0; i < s.dim(); ++i) {
    Complex w = s[i];
    for (std::size_t k = 0; k < n; ++k) w *= std::conj(slots[k](static_cast<Eigen::Index>(qubit_bit(i, n, k))));
    acc += w;
  }
  return acc;
}

}  // namespace detail

/// Safeguarded Newton ascent for |<psi|q>|^2 on the product of spinor
/// spheres. Each q_k moves along q_k + eps_k q_k^perp with complex eps_k, so
/// the step lives in 2n real coordinates. The Hessian is shifted to be
/// negative definite when needed and a step is kept only if g^2 does not
/// drop, so the iteration cannot walk off a maximum toward a saddle.
/// Returns the final Riemannian gradient norm.
inline double refine_newton(const PureState& s, std::vector<Spinor>& spinors, int max_steps = 50) {
  const std::size_t n = s.n_qubits();
  const auto dim = static_cast<Eigen::Index>(2 * n);
  double grad_norm = 0.0;
  auto value = [&](const std::vector<Spinor>& q) { return std::norm(detail::contract_all(s, q)); };

  for (int step = 0; step < max_steps; ++step) {
    std::vector<Spinor> perp(n);
    for (std::size_t k = 0; k < n; ++k) perp[k] = detail::orthogonal_spinor(spinors[k]);

    const Complex a0 = detail::contract_all(s, spinors);
    std::vector<Complex> first(n);
    for (std::size_t k = 0; k < n; ++k) {
      auto slots = spinors;
      slots[k] = perp[k];
      first[k] = detail::contract_all(s, slots);
    }

    // conj(eps_k) = u_k - i v_k, so each complex coefficient c enters the
    // real coordinates (u_k, v_k) as (c, -i c).
    const Complex sign[2] = {Complex(1.0, 0.0), Complex(0.0, -1.0)};
    Eigen::VectorXcd lin(dim);
    for (std::size_t k = 0; k < n; ++k) {
      for (int p = 0; p < 2; ++p) lin(static_cast<Eigen::Index>(2 * k + p)) = first[k] * sign[p];
    }
    Eigen::MatrixXcd quad = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t l = k + 1; l < n; ++l) {
        auto slots = spinors;
        slots[k] = perp[k];
        slots[l] = perp[l];
        const Complex c = detail::contract_all(s, slots);
        for (int p = 0; p < 2; ++p) {
          for (int r = 0; r < 2; ++r) {
            const auto i = static_cast<Eigen::Index>(2 * k + p);
            const auto j = static_cast<Eigen::Index>(2 * l + r);
            quad(i, j) = quad(j, i) = c * sign[p] * sign[r];
          }
        }
      }
    }

    const Eigen::VectorXd grad = 2.0 * (std::conj(a0) * lin).real();
    grad_norm = grad.norm();
    if (grad_norm < 1e-15) break;
    Eigen::MatrixXd hess = 2.0 * (lin.conjugate() * lin.transpose()).real() + 2.0 * (std::conj(a0) * quad).real();
    hess.diagonal().array() -= 2.0 * std::norm(a0);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hess);
    const double top = eig.eigenvalues().maxCoeff();
    const double floor = 1e-10 + 1e-3 * grad_norm;
    if (top > -floor) hess.diagonal().array() -= top + floor;
    Eigen::VectorXd delta = hess.ldlt().solve(-grad);

    // Near the optimum a Newton step changes g^2 below rounding level while
    // still shrinking the gradient, so allow a few ulps of slack.
    const double before = std::norm(a0);
    const double slack = 8.0 * std::numeric_limits<double>::epsilon() * before;
    bool accepted = false;
    for (int halving = 0; halving < 30 && !accepted; ++halving, delta *= 0.5) {
      std::vector<Spinor> trial(n);
      for (std::size_t k = 0; k < n; ++k) {
        const Complex eps(delta(static_cast<Eigen::Index>(2 * k)), delta(static_cast<Eigen::Index>(2 * k + 1)));
        trial[k] = (spinors[k] + eps * perp[k]).normalized();
      }
      if (value(trial) >= before - slack) {
        spinors = std::move(trial);
        accepted = true;
      }
    }
    if (!accepted) break;
  }
  return grad_norm;
}

/// Restarts whose ascent ended within this distance of the best g^2 get
/// Newton refinement.
inline constexpr double kRefineWindow = 1e-4;

/// Newton-refines the leading restarts in place and re-checks the g^2
/// convergence criterion with one more alternating sweep.
inline void refine_leading(const PureState& s, std::vector<AscentOutcome>& outcomes, const SolverConfig& cfg) {
  double best = 0.0;
  for (const auto& o : outcomes) best = std::max(best, o.g_squared);
  for (auto& o : outcomes) {
    if (o.g_squared < best - kRefineWindow) continue;
    auto spinors = o.spinors;
    refine_newton(s, spinors);
    AlternatingAscent ascent(s, spinors);
    const double before = ascent.g_squared();
    const double after = ascent.sweep();
    if (after >= o.g_squared - 8.0 * std::numeric_limits<double>::epsilon()) {
      o.g_squared = after;
      o.spinors = ascent.spinors();
      o.converged = o.converged || after - before < cfg.tolerance;
    }
  }
}

/// All starts after alternating ascent and refinement of the leading ones.
inline std::vector<AscentOutcome> solve_all_starts(const PureState& s, const SolverConfig& cfg) {
  auto outcomes = run_restarts(s, cfg);
  refine_leading(s, outcomes, cfg);
  return outcomes;
}

inline OverlapResult nearest_product_state(const PureState& s, const SolverConfig& cfg = {}) {
  const auto outcomes = solve_all_starts(s, cfg);
  std::size_t best = 0;
  for (std::size_t i = 1; i < outcomes.size(); ++i) {
    if (outcomes[i].g_squared > outcomes[best].g_squared) best = i;
  }
  const AscentOutcome& win = outcomes[best];

  OverlapResult result;
  result.product = ProductState(win.spinors);
  const double g = overlap_with_product(s, result.product);
  result.g_squared = g * g;
  result.restarts_used = static_cast<int>(outcomes.size());
  result.iterations = win.iterations;
  result.converged = win.converged;

  if (s.n_qubits() == 3) {
    const auto geometry = MarginalGeometry::of(s);
    const Eigen::Vector3d x = spinor_to_bloch(result.product[0]);
    const Eigen::Vector3d y = spinor_to_bloch(result.product[1]);
    const auto lm = lagrange_multipliers(geometry, x, y);
    result.stationarity_residual = stationarity_residual(geometry, x, y, lm.lambda1, lm.lambda2);
    if (lm.lambda1 > 0.0 && lm.lambda2 > 0.0) result.lagrange = lm;
  }
  return result;
}

}  // namespace geoent
