// Analytic maximal product overlaps: quadrilateral states, the three
// stationary branches of the c = 0, b_C = 0 family, generalized GHZ and W
// states, plus the numerical check that b_C = 0 forces g^2 = 1/2.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "geoent/invariants.hpp"
#include "geoent/overlap.hpp"
#include "geoent/random.hpp"
#include "geoent/state.hpp"

namespace geoent {

/// The closed form does not cover these parameters; use the numeric solver.
class InfeasibleClosedForm : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// ---------------------------------------------------------------------------
// Quadrilateral states  a|100> + b|010> + c|001> + d|111>

struct QuadrilateralParams {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;

  void validate(double tol = kNormTolerance) const {
    if (a < 0 || b < 0 || c < 0 || d < 0) throw std::invalid_argument("quadrilateral sides must be nonnegative");
    if (std::abs(a * a + b * b + c * c + d * d - 1.0) > tol) {
      throw std::invalid_argument("quadrilateral sides must satisfy a^2+b^2+c^2+d^2 = 1");
    }
  }

  double semiperimeter() const { return (a + b + c + d) / 2.0; }

  /// Every side at most the semiperimeter, i.e. a quadrilateral with these
  /// sides exists.
  bool sides_feasible() const {
    const double s = semiperimeter();
    return a <= s && b <= s && c <= s && d <= s;
  }

  /// Brahmagupta area of the cyclic quadrilateral (Heron when a side is 0).
  double area() const {
    const double s = semiperimeter();
    const double prod = (s - a) * (s - b) * (s - c) * (s - d);
    return std::sqrt(std::max(0.0, prod));
  }

  /// r_a .. r_d of the nearest-product-state formula.
  std::array<double, 4> r_coefficients() const {
    return {a * (b * b + c * c + d * d - a * a) + 2.0 * b * c * d,
            b * (a * a + c * c + d * d - b * b) + 2.0 * a * c * d,
            c * (b * b + a * a + d * d - c * c) + 2.0 * a * b * d,
            d * (b * b + c * c + a * a - d * d) + 2.0 * a * b * c};
  }

  /// Sides feasible, nonzero area and all r-coefficients nonnegative.
  bool closed_form_applies() const {
    if (!sides_feasible() || !(area() > 0.0)) return false;
    const auto r = r_coefficients();
    return std::all_of(r.begin(), r.end(), [](double x) { return x >= 0.0; });
  }

  double circumradius() const {
    return std::sqrt((a * b + c * d) * (a * c + b * d) * (a * d + b * c)) / (4.0 * area());
  }

  /// Same orbit as the h = 0 canonical state (flip all three qubits).
  static QuadrilateralParams from_canonical(const CanonicalParams& p) {
    if (p.h > 1e-12) throw std::invalid_argument("quadrilateral states have h = 0");
    return {p.a, p.b, p.c, p.d};
  }
};

inline PureState quadrilateral_state(const QuadrilateralParams& p) {
  p.validate();
  std::vector<Complex> amps(8);
  amps[0b100] = p.a;
  amps[0b010] = p.b;
  amps[0b001] = p.c;
  amps[0b111] = p.d;
  return PureState(3, std::move(amps));
}

namespace detail {

inline void require_closed_form(const QuadrilateralParams& p) {
  p.validate();
  if (!p.sides_feasible()) {
    throw InfeasibleClosedForm("no quadrilateral with these sides (one side exceeds the semiperimeter)");
  }
  if (!(p.area() > 0.0)) throw InfeasibleClosedForm("degenerate quadrilateral with zero area");
  const auto r = p.r_coefficients();
  if (std::any_of(r.begin(), r.end(), [](double x) { return x < 0.0; })) {
    throw InfeasibleClosedForm("negative r-coefficient: the circumradius solution is not physical here");
  }
}

}  // namespace detail

/// g = 2R, twice the circumradius of the cyclic quadrilateral with sides a, b, c, d.
inline double quadrilateral_overlap(const QuadrilateralParams& p) {
  detail::require_closed_form(p);
  return 2.0 * p.circumradius();
}

/// Nearest product state of quadrilateral_state(p).
inline ProductState quadrilateral_nearest(const QuadrilateralParams& p) {
  detail::require_closed_form(p);
  const auto [ra, rb, rc, rd] = p.r_coefficients();
  const double four_s = 4.0 * p.area();
  const auto [a, b, c, d] = std::array{p.a, p.b, p.c, p.d};
  return ProductState({
      Spinor(std::sqrt(ra * rd), std::sqrt(rb * rc)) / (four_s * std::sqrt(a * d + b * c)),
      Spinor(std::sqrt(rb * rd), std::sqrt(ra * rc)) / (four_s * std::sqrt(b * d + a * c)),
      Spinor(std::sqrt(rc * rd), std::sqrt(ra * rb)) / (four_s * std::sqrt(c * d + a * b)),
  });
}

/// Quadrilateral with c^2 + d^2 = a^2 + b^2 (third Bloch vector zero).
inline bool is_shared_quadrilateral(const QuadrilateralParams& p, double tol = 1e-10) {
  return std::abs(p.c * p.c + p.d * p.d - p.a * p.a - p.b * p.b) <= tol;
}

/// Nearest product state when c^2 + d^2 = a^2 + b^2.
inline ProductState shared_quadrilateral_nearest(const QuadrilateralParams& p) {
  p.validate();
  if (!is_shared_quadrilateral(p)) throw std::invalid_argument("requires c^2 + d^2 = a^2 + b^2");
  const auto [a, b, c, d] = std::array{p.a, p.b, p.c, p.d};
  return ProductState({
      Spinor(std::sqrt(b * c), std::sqrt(a * d)) / std::sqrt(a * d + b * c),
      Spinor(std::sqrt(a * c), std::sqrt(b * d)) / std::sqrt(a * c + b * d),
      Spinor(std::sqrt(d * c), std::sqrt(a * b)) / std::sqrt(a * b + c * d),
  });
}

/// g = [(c^2+d^2)ab + (a^2+b^2)cd] / sqrt((ad+bc)(ac+bd)(ab+cd)), valid when
/// c^2 + d^2 = a^2 + b^2.
inline double shared_quadrilateral_overlap(const QuadrilateralParams& p) {
  p.validate();
  if (!is_shared_quadrilateral(p)) throw std::invalid_argument("requires c^2 + d^2 = a^2 + b^2");
  const auto [a, b, c, d] = std::array{p.a, p.b, p.c, p.d};
  const double denom = std::sqrt((a * d + b * c) * (a * c + b * d) * (a * b + c * d));
  if (!(denom > 0.0)) throw InfeasibleClosedForm("degenerate shared quadrilateral");
  return ((c * c + d * d) * a * b + (a * a + b * b) * c * d) / denom;
}

// ---------------------------------------------------------------------------
// c = 0, b_C = 0: SVD of G and the stationary branches

struct ZeroModeBranch {
  Eigen::Vector3d x;
  Eigen::Vector3d y;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double g_squared = 0.0;
  // 1/2 - g_squared, evaluated without cancellation:
  // 1 - b_A - b_B = (sqrt(a^2+h^2) - a)^2 + (sqrt(b^2+h^2) - b)^2.
  double deficit = 0.0;
  double residual = 0.0;
};

/// Solutions tied to the middle singular value 2ab. Never physical: the
/// projection onto the zero mode would need b_A b_B <= lambda1 lambda2 = 4a^2b^2.
struct MiddleBranch {
  bool nonphysical = true;
  double bloch_product = 0.0;       // b_A b_B
  double multiplier_product = 0.0;  // lambda1 lambda2 = (2ab)^2
  std::string reason;
};

struct MainBranch {
  Eigen::Vector3d x;
  Eigen::Vector3d y;
  double lambda1 = 0.0;  // 2(a^2 + h^2)
  double lambda2 = 0.0;  // 2(b^2 + h^2)
  double lambda1_mu_form = 0.0;
  double lambda2_mu_form = 0.0;
  double g_squared = 0.0;
  double residual = 0.0;
};

struct BranchReport {
  double b_a = 0.0;
  double b_b = 0.0;
  double mu = 0.0;
  double alpha = 0.0;  // tan alpha = h / a
  double beta = 0.0;   // tan beta = h / b
  Eigen::Matrix3d u;
  Eigen::Matrix3d v;
  Eigen::Vector3d singular_values;  // (2 mu, 2ab, 0)
  ZeroModeBranch zero_mode;
  MiddleBranch middle_branch;
  MainBranch main_branch;
  double final_g_squared = 0.0;
};

/// Rotation by `angle` in the x-z plane, [[cos, 0, sin], [0, 1, 0], [-sin, 0, cos]].
inline Eigen::Matrix3d xz_rotation(double angle) {
  Eigen::Matrix3d r;
  r << std::cos(angle), 0.0, std::sin(angle), 0.0, 1.0, 0.0, -std::sin(angle), 0.0, std::cos(angle);
  return r;
}

inline void require_h_nonzero_family(const CanonicalParams& p, double tol = 1e-10) {
  p.validate();
  if (p.c > tol) throw std::invalid_argument("branch solutions need c = 0");
  if (std::abs(p.gamma) > tol) throw std::invalid_argument("branch solutions need gamma = 0");
  if (std::abs(p.d * p.d - (p.a * p.a + p.b * p.b + p.h * p.h)) > tol) {
    throw std::invalid_argument("branch solutions need d^2 = a^2 + b^2 + h^2");
  }
}

/// Stationary points of the quarter form for c = 0, gamma = 0,
/// d^2 = a^2 + b^2 + h^2, using G = U D V^T. In the rotated frame
/// x' = U^T x, y' = V^T y the equations become D y' + b_A z = lambda1 x',
/// D x' + b_B z = lambda2 y' with z = (0, 0, 1).
inline BranchReport svd_branch_solutions(const CanonicalParams& p) {
  require_h_nonzero_family(p);
  const double a = p.a;
  const double b = p.b;
  const double h = p.h;
  const MarginalGeometry geometry = MarginalGeometry::of(canonical_to_state(p));

  BranchReport r;
  r.b_a = 2.0 * a * std::sqrt(h * h + a * a);
  r.b_b = 2.0 * b * std::sqrt(h * h + b * b);
  r.mu = std::sqrt((h * h + a * a) * (h * h + b * b));
  r.alpha = std::atan2(h, a);
  r.beta = std::atan2(h, b);
  r.u = xz_rotation(r.alpha);
  r.v = xz_rotation(r.beta);
  r.singular_values = {2.0 * r.mu, 2.0 * a * b, 0.0};
  const Eigen::Vector3d zeta(0.0, 0.0, 1.0);

  // Zero mode: x' = y' = zeta, i.e. x, y along b_A, b_B.
  auto& zm = r.zero_mode;
  zm.x = r.u * zeta;
  zm.y = r.v * zeta;
  zm.lambda1 = r.b_a;
  zm.lambda2 = r.b_b;
  zm.g_squared = 0.25 * (1.0 + r.b_a + r.b_b);
  const double da = h * h / (std::sqrt(a * a + h * h) + a);
  const double db = h * h / (std::sqrt(b * b + h * h) + b);
  zm.deficit = 0.25 * (da * da + db * db);
  zm.residual = stationarity_residual(geometry, zm.x, zm.y, zm.lambda1, zm.lambda2);

  auto& mid = r.middle_branch;
  mid.bloch_product = r.b_a * r.b_b;
  mid.multiplier_product = 4.0 * a * a * b * b;
  if (mid.bloch_product > mid.multiplier_product) {
    mid.reason = "b_A b_B = " + std::to_string(mid.bloch_product) + " exceeds lambda1 lambda2 = (2ab)^2 = " +
                 std::to_string(mid.multiplier_product) + " while (z.x')(z.y') <= 1";
  } else {
    mid.reason = "ab = 0: lambda1 lambda2 = 0, no solution with both multipliers positive";
  }

  // Main branch: x' = (sin alpha, 0, cos alpha) = b_A / |b_A| as a vector.
  auto& mb = r.main_branch;
  const Eigen::Vector3d x_rot(std::sin(r.alpha), 0.0, std::cos(r.alpha));
  const Eigen::Vector3d y_rot(std::sin(r.beta), 0.0, std::cos(r.beta));
  mb.x = r.u * x_rot;
  mb.y = r.v * y_rot;
  mb.lambda1 = 2.0 * (a * a + h * h);
  mb.lambda2 = 2.0 * (b * b + h * h);
  const double four_mu_sq = 4.0 * r.mu * r.mu;
  mb.lambda1_mu_form = 2.0 * r.mu * std::sqrt((r.b_a * r.b_a + four_mu_sq) / (r.b_b * r.b_b + four_mu_sq));
  mb.lambda2_mu_form = 2.0 * r.mu * std::sqrt((r.b_b * r.b_b + four_mu_sq) / (r.b_a * r.b_a + four_mu_sq));
  mb.g_squared = quarter_form(mb.x, mb.y, geometry.b_a, geometry.b_b, geometry.g);
  mb.residual = stationarity_residual(geometry, mb.x, mb.y, mb.lambda1, mb.lambda2);

  r.final_g_squared = std::max(zm.g_squared, mb.g_squared);
  return r;
}

// ---------------------------------------------------------------------------
// Theorem check: b_C = 0 implies g^2 = 1/2

inline constexpr double kTheoremTolerance = 1e-7;
inline constexpr double kZeroModeTolerance = 1e-10;

struct TheoremReport {
  ZeroBlochFamily family = ZeroBlochFamily::kQuadrilateral;
  CanonicalParams params;
  std::size_t zero_qubit = 2;
  double zero_bloch_length = 0.0;
  double t = 0.0;
  double zero_mode_residual_left = 0.0;   // |G^T b_1|
  double zero_mode_residual_right = 0.0;  // |G b_2|
  double closed_form_g_squared = 0.0;
  double numeric_g_squared = 0.0;
  std::string closed_form_path;
  bool passed = false;

  double deviation() const {
    return std::max(std::abs(numeric_g_squared - 0.5), std::abs(closed_form_g_squared - 0.5));
  }
};

/// Permutation placing original qubit C at position `zero_qubit`.
inline std::array<std::size_t, 3> relabel_for_zero_qubit(std::size_t zero_qubit) {
  switch (zero_qubit) {
    case 0: return {2, 0, 1};
    case 1: return {0, 2, 1};
    case 2: return {0, 1, 2};
    default: throw std::out_of_range("zero_qubit must be 0, 1 or 2");
  }
}

inline TheoremReport theorem_check(const CanonicalParams& p, ZeroBlochFamily family, const SolverConfig& cfg = {},
                                   std::size_t zero_qubit = 2, double tolerance = kTheoremTolerance) {
  TheoremReport rep;
  rep.family = family;
  rep.params = p;
  rep.zero_qubit = zero_qubit;

  const auto perm = relabel_for_zero_qubit(zero_qubit);
  const PureState s = permute_qubits(canonical_to_state(p), perm);
  std::array<std::size_t, 2> others{};
  for (std::size_t q = 0, k = 0; q < 3; ++q) {
    if (q != zero_qubit) others[k++] = q;
  }

  rep.zero_bloch_length = bloch_vector(s, zero_qubit).norm();
  rep.t = sextic_t_trace(s);
  const CorrelationMatrix g = correlation_matrix(s, others[0], others[1]);
  rep.zero_mode_residual_left = (g.transpose() * bloch_vector(s, others[0])).norm();
  rep.zero_mode_residual_right = (g * bloch_vector(s, others[1])).norm();

  if (family == ZeroBlochFamily::kQuadrilateral) {
    const double overlap = shared_quadrilateral_overlap(QuadrilateralParams::from_canonical(p));
    rep.closed_form_g_squared = overlap * overlap;
    rep.closed_form_path = "shared quadrilateral";
  } else {
    rep.closed_form_g_squared = svd_branch_solutions(p).final_g_squared;
    rep.closed_form_path = "svd branches";
  }
  rep.numeric_g_squared = nearest_product_state(s, cfg).g_squared;

  rep.passed = rep.zero_bloch_length <= kZeroModeTolerance && std::abs(rep.t) <= kZeroModeTolerance &&
               rep.zero_mode_residual_left <= kZeroModeTolerance &&
               rep.zero_mode_residual_right <= kZeroModeTolerance && rep.deviation() <= tolerance;
  return rep;
}

// ---------------------------------------------------------------------------
// Generalized GHZ, W and Dicke states

/// cos(theta)|0...0> + sin(theta)|1...1>
inline PureState ghz_state(double theta, std::size_t n_qubits) {
  if (n_qubits < 2) throw std::invalid_argument("GHZ state needs n >= 2");
  std::vector<Complex> amps(std::size_t{1} << n_qubits);
  amps.front() = std::cos(theta);
  amps.back() = std::sin(theta);
  return PureState(n_qubits, std::move(amps));
}

/// (1 + |b|) / 2 with |b| = |cos 2 theta|
inline double ghz_overlap(double theta, std::size_t n_qubits) {
  if (n_qubits < 2) throw std::invalid_argument("GHZ state needs n >= 2");
  return (1.0 + std::abs(std::cos(2.0 * theta))) / 2.0;
}

/// c_1|10...0> + c_2|010...0> + ... + c_n|0...01>
inline PureState w_state(std::span<const double> coeffs) {
  const std::size_t n = coeffs.size();
  if (n < 2) throw std::invalid_argument("W state needs n >= 2");
  std::vector<Complex> amps(std::size_t{1} << n);
  for (std::size_t k = 0; k < n; ++k) {
    if (coeffs[k] < 0.0) throw std::invalid_argument("W coefficients must be nonnegative");
    amps[std::size_t{1} << qubit_shift(n, k)] = coeffs[k];
  }
  return PureState(n, std::move(amps));
}

struct WnReport {
  std::vector<double> coeffs;
  double g_squared = 0.0;
  std::vector<double> bloch_lengths;
  bool has_zero_bloch = false;
  bool g_squared_is_half = false;
  bool correspondence_holds = false;  // has_zero_bloch == g_squared_is_half
};

inline WnReport wn_overlap(std::span<const double> coeffs, const SolverConfig& cfg = {}) {
  double norm_sq = 0.0;
  for (double c : coeffs) norm_sq += c * c;
  if (std::abs(norm_sq - 1.0) > 1e-10) throw std::invalid_argument("W coefficients must satisfy sum c_i^2 = 1");
  const PureState s = w_state(coeffs);
  WnReport rep;
  rep.coeffs.assign(coeffs.begin(), coeffs.end());
  rep.g_squared = nearest_product_state(s, cfg).g_squared;
  for (std::size_t q = 0; q < s.n_qubits(); ++q) rep.bloch_lengths.push_back(bloch_vector(s, q).norm());
  rep.has_zero_bloch =
      std::any_of(rep.bloch_lengths.begin(), rep.bloch_lengths.end(), [](double b) { return b <= 1e-8; });
  rep.g_squared_is_half = std::abs(rep.g_squared - 0.5) <= 1e-6;
  rep.correspondence_holds = rep.has_zero_bloch == rep.g_squared_is_half;
  return rep;
}

/// Equal superposition of the six weight-2 strings on four qubits.
inline PureState dicke4_state() {
  std::vector<Complex> amps(16);
  for (std::size_t i : {0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100}) amps[i] = 1.0 / std::sqrt(6.0);
  return PureState(4, std::move(amps));
}

}  // namespace geoent
