// JSON state files:
//   {"n_qubits": 3, "amplitudes": [[re, im], ...]}
// with 2^n_qubits amplitudes in the qubit-0-most-significant order.

#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "geoent/state.hpp"

namespace geoent {

/// Malformed state document; `field()` names the offending key.
class StateFormatError : public std::runtime_error {
 public:
  StateFormatError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Inputs whose norm deviates from 1 by more than this are rejected unless
/// explicitly allowed.
inline constexpr double kLooseNormTolerance = 1e-6;

struct StateReadOptions {
  bool allow_unnormalized = false;
};

struct ParsedState {
  PureState state;
  std::optional<std::string> warning;
};

inline ParsedState state_from_json(const nlohmann::json& doc, const StateReadOptions& opts = {}) {
  if (!doc.is_object()) throw StateFormatError("document", "expected a JSON object");
  if (!doc.contains("n_qubits")) throw StateFormatError("n_qubits", "missing");
  const auto& nq = doc.at("n_qubits");
  if (!nq.is_number_integer() || nq.get<long long>() < 1 || nq.get<long long>() > static_cast<long long>(kMaxQubits)) {
    throw StateFormatError("n_qubits", "expected an integer in [1, " + std::to_string(kMaxQubits) + "]");
  }
  const auto n = nq.get<std::size_t>();

  if (!doc.contains("amplitudes")) throw StateFormatError("amplitudes", "missing");
  const auto& arr = doc.at("amplitudes");
  if (!arr.is_array()) throw StateFormatError("amplitudes", "expected an array of [re, im] pairs");
  const std::size_t dim = std::size_t{1} << n;
  if (arr.size() != dim) {
    throw StateFormatError("amplitudes", "expected " + std::to_string(dim) + " entries for " + std::to_string(n) +
                                             " qubits, got " + std::to_string(arr.size()));
  }
  std::vector<Complex> amps;
  amps.reserve(dim);
  double norm_sq = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    const auto& pair = arr[i];
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
      throw StateFormatError("amplitudes[" + std::to_string(i) + "]", "expected [re, im] with two numbers");
    }
    amps.emplace_back(pair[0].get<double>(), pair[1].get<double>());
    norm_sq += std::norm(amps.back());
  }
  if (!(norm_sq > 0.0)) throw StateFormatError("amplitudes", "all-zero amplitude vector");

  const double deviation = std::abs(std::sqrt(norm_sq) - 1.0);
  std::optional<std::string> warning;
  if (deviation > kLooseNormTolerance && !opts.allow_unnormalized) {
    throw StateFormatError("amplitudes", "norm deviates from 1 by " + std::to_string(deviation) +
                                             "; pass the normalize option to accept it");
  }
  if (deviation > kNormTolerance) {
    warning = "input norm deviates from 1 by " + std::to_string(deviation) + "; state was normalized";
  }
  return {PureState(n, std::move(amps)), std::move(warning)};
}

inline ParsedState parse_state_json(std::string_view text, const StateReadOptions& opts = {}) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw StateFormatError("document", e.what());
  }
  return state_from_json(doc, opts);
}

inline nlohmann::json state_to_json(const PureState& s) {
  nlohmann::json amps = nlohmann::json::array();
  for (const auto& a : s.amplitudes()) amps.push_back({a.real(), a.imag()});
  return {{"n_qubits", s.n_qubits()}, {"amplitudes", std::move(amps)}};
}

inline std::string write_state_json(const PureState& s, int indent = 2) { return state_to_json(s).dump(indent); }

}  // namespace geoent
