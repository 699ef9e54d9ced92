// Pure n-qubit states, local unitary action and reduced density matrices.
//
// Bit ordering: amplitude index i is read as an n-bit string with qubit 0
// (qubit A) as the most significant bit, so for three qubits |011> is index 3.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace geoent {

using Complex = std::complex<double>;
using Spinor = Eigen::Vector2cd;
using QubitDensity = Eigen::Matrix2cd;
using PairDensity = Eigen::Matrix4cd;

inline constexpr std::size_t kMaxQubits = 8;
inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kUnitarityTolerance = 1e-10;

/// Bit position of qubit `q` inside an amplitude index of an n-qubit register.
constexpr std::size_t qubit_shift(std::size_t n_qubits, std::size_t q) { return n_qubits - 1 - q; }

constexpr std::size_t qubit_bit(std::size_t index, std::size_t n_qubits, std::size_t q) {
  return (index >> qubit_shift(n_qubits, q)) & 1U;
}

/// Normalized state vector over n qubits. Immutable after construction.
class PureState {
 public:
  /// Normalizes `amplitudes`; throws std::invalid_argument on a length
  /// mismatch or an all-zero vector.
  PureState(std::size_t n_qubits, std::vector<Complex> amplitudes)
      : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
    if (n_qubits_ == 0 || n_qubits_ > kMaxQubits) {
      throw std::invalid_argument("n_qubits must be in [1, " + std::to_string(kMaxQubits) + "], got " +
                                  std::to_string(n_qubits_));
    }
    if (amplitudes_.size() != (std::size_t{1} << n_qubits_)) {
      throw std::invalid_argument("expected " + std::to_string(std::size_t{1} << n_qubits_) +
                                  " amplitudes for " + std::to_string(n_qubits_) + " qubits, got " +
                                  std::to_string(amplitudes_.size()));
    }
    double norm_sq = 0.0;
    for (const auto& amp : amplitudes_) {
      if (!std::isfinite(amp.real()) || !std::isfinite(amp.imag())) {
        throw std::invalid_argument("amplitudes must be finite");
      }
      norm_sq += std::norm(amp);
    }
    if (norm_sq == 0.0) throw std::invalid_argument("all-zero amplitude vector cannot be normalized");
    norm_ = std::sqrt(norm_sq);
    if (norm_ != 1.0) {
      for (auto& amp : amplitudes_) amp /= norm_;
    }
  }

  std::size_t n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return amplitudes_.size(); }
  std::span<const Complex> amplitudes() const { return amplitudes_; }
  const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }

  /// Norm of the amplitude vector before normalization.
  double input_norm() const { return norm_; }

  /// Factor the input amplitudes were multiplied by (1 / input_norm).
  double normalization_factor() const { return 1.0 / norm_; }

 private:
  std::size_t n_qubits_;
  std::vector<Complex> amplitudes_;
  double norm_ = 1.0;
};

inline PureState make_state(std::size_t n_qubits, std::vector<Complex> amplitudes) {
  return PureState(n_qubits, std::move(amplitudes));
}

inline PureState basis_state(std::size_t n_qubits, std::size_t index) {
  std::vector<Complex> amps(std::size_t{1} << n_qubits);
  amps.at(index) = 1.0;
  return PureState(n_qubits, std::move(amps));
}

/// |<a|b>|^2
inline double fidelity(const PureState& a, const PureState& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("fidelity: dimension mismatch");
  Complex ip = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) ip += std::conj(a[i]) * b[i];
  return std::norm(ip);
}

// ---------------------------------------------------------------------------
// Three-qubit canonical form
//   a|011> + b|101> + c|110> + d|000> + e^{i gamma} h|111>

struct CanonicalParams {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  double h = 0.0;
  double gamma = 0.0;

  double norm_squared() const { return a * a + b * b + c * c + d * d + h * h; }

  /// Throws std::invalid_argument when a coefficient is negative or the
  /// squares do not sum to one within `tol`.
  void validate(double tol = kNormTolerance) const {
    if (a < 0 || b < 0 || c < 0 || d < 0 || h < 0) {
      throw std::invalid_argument("canonical coefficients must be nonnegative");
    }
    if (std::abs(norm_squared() - 1.0) > tol) {
      throw std::invalid_argument("canonical coefficients must satisfy a^2+b^2+c^2+d^2+h^2 = 1");
    }
    if (!std::isfinite(gamma)) throw std::invalid_argument("gamma must be finite");
  }
};

inline PureState canonical_to_state(const CanonicalParams& p) {
  p.validate();
  std::vector<Complex> amps(8);
  amps[0b000] = p.d;
  amps[0b011] = p.a;
  amps[0b101] = p.b;
  amps[0b110] = p.c;
  amps[0b111] = std::polar(p.h, p.gamma);
  return PureState(3, std::move(amps));
}

// ---------------------------------------------------------------------------
// Local unitaries

struct LocalUnitary {
  std::vector<Eigen::Matrix2cd> factors;

  static LocalUnitary identity(std::size_t n_qubits) {
    return LocalUnitary{std::vector<Eigen::Matrix2cd>(n_qubits, Eigen::Matrix2cd::Identity())};
  }

  bool is_unitary(double tol = kUnitarityTolerance) const {
    for (const auto& u : factors) {
      if ((u * u.adjoint() - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() > tol) return false;
    }
    return true;
  }
};

/// Applies a single 2x2 matrix to qubit `q` in place. No unitarity check.
inline void apply_qubit_matrix(std::vector<Complex>& amps, std::size_t n_qubits, std::size_t q,
                               const Eigen::Matrix2cd& u) {
  const std::size_t stride = std::size_t{1} << qubit_shift(n_qubits, q);
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (i & stride) continue;
    const Complex lo = amps[i];
    const Complex hi = amps[i | stride];
    amps[i] = u(0, 0) * lo + u(0, 1) * hi;
    amps[i | stride] = u(1, 0) * lo + u(1, 1) * hi;
  }
}

inline PureState apply_local_unitary(const PureState& s, const LocalUnitary& u) {
  if (u.factors.size() != s.n_qubits()) {
    throw std::invalid_argument("local unitary has " + std::to_string(u.factors.size()) + " factors for a " +
                                std::to_string(s.n_qubits()) + "-qubit state");
  }
  if (!u.is_unitary()) throw std::invalid_argument("local unitary factor is not unitary");
  std::vector<Complex> amps(s.amplitudes().begin(), s.amplitudes().end());
  for (std::size_t q = 0; q < s.n_qubits(); ++q) apply_qubit_matrix(amps, s.n_qubits(), q, u.factors[q]);
  return PureState(s.n_qubits(), std::move(amps));
}

/// Relabels qubits: qubit k of the result is qubit `perm[k]` of `s`.
inline PureState permute_qubits(const PureState& s, std::span<const std::size_t> perm) {
  const std::size_t n = s.n_qubits();
  if (perm.size() != n) throw std::invalid_argument("permutation length must equal qubit count");
  std::vector<bool> seen(n, false);
  for (auto p : perm) {
    if (p >= n || seen[p]) throw std::invalid_argument("not a permutation of the qubits");
    seen[p] = true;
  }
  std::vector<Complex> amps(s.dim());
  for (std::size_t i = 0; i < s.dim(); ++i) {
    std::size_t j = 0;
    for (std::size_t k = 0; k < n; ++k) j |= qubit_bit(i, n, perm[k]) << qubit_shift(n, k);
    amps[j] = s[i];
  }
  return PureState(n, std::move(amps));
}

// ---------------------------------------------------------------------------
// Reduced density matrices

inline void check_qubit(const PureState& s, std::size_t q) {
  if (q >= s.n_qubits()) {
    throw std::out_of_range("qubit index " + std::to_string(q) + " out of range for " +
                            std::to_string(s.n_qubits()) + " qubits");
  }
}

inline QubitDensity partial_trace_single(const PureState& s, std::size_t q) {
  check_qubit(s, q);
  const std::size_t stride = std::size_t{1} << qubit_shift(s.n_qubits(), q);
  QubitDensity rho = QubitDensity::Zero();
  for (std::size_t i = 0; i < s.dim(); ++i) {
    if (i & stride) continue;
    const Complex lo = s[i];
    const Complex hi = s[i | stride];
    rho(0, 0) += std::norm(lo);
    rho(1, 1) += std::norm(hi);
    rho(0, 1) += lo * std::conj(hi);
  }
  rho(1, 0) = std::conj(rho(0, 1));
  return rho;
}

/// Two-qubit marginal with `q1` as the more significant bit of the 4-dim index.
inline PairDensity partial_trace_pair(const PureState& s, std::size_t q1, std::size_t q2) {
  check_qubit(s, q1);
  check_qubit(s, q2);
  if (q1 == q2) throw std::invalid_argument("partial_trace_pair needs two distinct qubits");
  const std::size_t n = s.n_qubits();
  const std::size_t m1 = std::size_t{1} << qubit_shift(n, q1);
  const std::size_t m2 = std::size_t{1} << qubit_shift(n, q2);
  PairDensity rho = PairDensity::Zero();
  for (std::size_t rest = 0; rest < s.dim(); ++rest) {
    if (rest & (m1 | m2)) continue;
    Complex col[4];
    for (std::size_t k = 0; k < 4; ++k) col[k] = s[rest | ((k & 2) ? m1 : 0) | ((k & 1) ? m2 : 0)];
    for (std::size_t r = 0; r < 4; ++r) {
      for (std::size_t c = 0; c < 4; ++c) rho(r, c) += col[r] * std::conj(col[c]);
    }
  }
  return rho;
}

// ---------------------------------------------------------------------------
// Product states

/// One normalized 2-spinor per qubit.
class ProductState {
 public:
  ProductState() = default;
  explicit ProductState(std::vector<Spinor> spinors) : spinors_(std::move(spinors)) {
    for (auto& q : spinors_) {
      const double n = q.norm();
      if (std::abs(n - 1.0) > 1e-10) {
        throw std::invalid_argument("product state spinors must be normalized");
      }
      q /= n;
    }
  }

  std::size_t n_qubits() const { return spinors_.size(); }
  const Spinor& operator[](std::size_t q) const { return spinors_[q]; }
  std::span<const Spinor> spinors() const { return spinors_; }

  /// Dense amplitude vector of the tensor product.
  PureState to_state() const {
    const std::size_t n = spinors_.size();
    std::vector<Complex> amps(std::size_t{1} << n);
    for (std::size_t i = 0; i < amps.size(); ++i) {
      Complex v = 1.0;
      for (std::size_t q = 0; q < n; ++q) v *= spinors_[q](static_cast<Eigen::Index>(qubit_bit(i, n, q)));
      amps[i] = v;
    }
    return PureState(n, std::move(amps));
  }

 private:
  std::vector<Spinor> spinors_;
};

/// |<psi| q_0 q_1 ... q_{n-1}>|
inline double overlap_with_product(const PureState& s, const ProductState& q) {
  if (q.n_qubits() != s.n_qubits()) throw std::invalid_argument("product state has wrong qubit count");
  const std::size_t n = s.n_qubits();
  Complex acc = 0.0;
  for (std::size_t i = 0; i < s.dim(); ++i) {
    Complex v = std::conj(s[i]);
    for (std::size_t k = 0; k < n; ++k) v *= q[k](static_cast<Eigen::Index>(qubit_bit(i, n, k)));
    acc += v;
  }
  return std::abs(acc);
}

}  // namespace geoent
