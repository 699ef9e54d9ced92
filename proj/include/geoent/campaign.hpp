// Batch runs: the b_C = 0 verification campaign and the exploratory search
// for g^2 = 1/2 states whose Bloch vectors are all nonzero.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "geoent/closed_form.hpp"
#include "geoent/invariants.hpp"
#include "geoent/overlap.hpp"
#include "geoent/random.hpp"

namespace geoent {

/// out[i] = fn(i) for i in [0, count), spread over worker threads. Output
/// order depends only on the index.
template <typename Fn>
auto parallel_map(std::size_t count, Fn fn, unsigned workers = std::thread::hardware_concurrency())
    -> std::vector<decltype(fn(std::size_t{}))> {
  std::vector<decltype(fn(std::size_t{}))> out(count);
  workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          out[i] = fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

// ---------------------------------------------------------------------------

struct CampaignFailure {
  std::size_t index = 0;
  TheoremReport report;
};

struct CampaignReport {
  ZeroBlochFamily family = ZeroBlochFamily::kQuadrilateral;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double tolerance = kTheoremTolerance;
  double max_deviation = 0.0;  // max |g^2 - 1/2| over numeric and closed form
  double max_abs_t = 0.0;
  double max_zero_mode_residual = 0.0;
  double max_zero_bloch = 0.0;
  std::vector<CampaignFailure> failures;

  bool passed() const { return failures.empty(); }
};

/// Solver settings used per campaign sample unless overridden.
inline SolverConfig campaign_solver_config() {
  SolverConfig cfg;
  cfg.restarts = 16;
  return cfg;
}

/// Sample i draws its parameters and its solver seed from (seed, i), so the
/// report does not depend on the number of workers.
inline CampaignReport run_theorem_campaign(ZeroBlochFamily family, std::size_t samples, std::uint64_t seed,
                                           double tolerance = kTheoremTolerance,
                                           SolverConfig cfg = campaign_solver_config()) {
  const auto reports = parallel_map(samples, [&](std::size_t i) {
    Rng rng = derive_rng(seed, i);
    const CanonicalParams p = sample_zero_bloch_manifold(family, rng);
    SolverConfig local = cfg;
    local.seed = rng();
    return theorem_check(p, family, local, 2, tolerance);
  });

  CampaignReport out;
  out.family = family;
  out.samples = samples;
  out.seed = seed;
  out.tolerance = tolerance;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    out.max_deviation = std::max(out.max_deviation, r.deviation());
    out.max_abs_t = std::max(out.max_abs_t, std::abs(r.t));
    out.max_zero_mode_residual =
        std::max({out.max_zero_mode_residual, r.zero_mode_residual_left, r.zero_mode_residual_right});
    out.max_zero_bloch = std::max(out.max_zero_bloch, r.zero_bloch_length);
    if (!r.passed) out.failures.push_back({i, r});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Inverse search (exploratory; no claim either way)

enum class SearchSource { kHaar, kControlQuadrilateral, kControlHNonzero, kControlGhz };

inline std::string_view to_string(SearchSource s) {
  switch (s) {
    case SearchSource::kHaar: return "haar";
    case SearchSource::kControlQuadrilateral: return "control-quadrilateral";
    case SearchSource::kControlHNonzero: return "control-h-nonzero";
    case SearchSource::kControlGhz: return "control-ghz";
  }
  return "unknown";
}

struct SearchEntry {
  SearchSource source = SearchSource::kHaar;
  std::size_t index = 0;
  double g_squared = 0.0;
  double min_bloch = 0.0;
  bool on_target = false;  // |g^2 - 1/2| <= window
};

struct InverseSearchReport {
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double window = 1e-4;
  std::vector<SearchEntry> entries;  // controls first, then refined samples

  /// min Bloch lengths of the filtered Haar-derived entries, ascending.
  std::vector<double> filtered_min_bloch() const {
    std::vector<double> v;
    for (const auto& e : entries) {
      if (e.source == SearchSource::kHaar && e.on_target) v.push_back(e.min_bloch);
    }
    std::sort(v.begin(), v.end());
    return v;
  }
};

inline double min_bloch_length(const PureState& s) {
  double m = 1.0;
  for (std::size_t q = 0; q < s.n_qubits(); ++q) m = std::min(m, bloch_vector(s, q).norm());
  return m;
}

namespace detail {

inline PureState mix_states(const PureState& from, const PureState& to, double s) {
  std::vector<Complex> amps(from.dim());
  for (std::size_t i = 0; i < amps.size(); ++i) amps[i] = (1.0 - s) * from[i] + s * to[i];
  return PureState(from.n_qubits(), std::move(amps));
}

}  // namespace detail

/// Each Haar sample is moved onto g^2 = 1/2 by bisection along the straight
/// path toward |000> (if g^2 < 1/2) or the W state (if g^2 > 1/2); the
/// smallest Bloch length of the end point is recorded.
inline InverseSearchReport inverse_search(std::size_t samples, std::uint64_t seed, double window = 1e-4) {
  InverseSearchReport rep;
  rep.samples = samples;
  rep.seed = seed;
  rep.window = window;
  SolverConfig cfg = campaign_solver_config();
  cfg.seed = seed;

  auto record = [&](SearchSource src, std::size_t index, const PureState& s) {
    const double g2 = nearest_product_state(s, cfg).g_squared;
    return SearchEntry{src, index, g2, min_bloch_length(s), std::abs(g2 - 0.5) <= window};
  };
  for (std::size_t k = 0; k < 2; ++k) {
    Rng rng = derive_rng(seed ^ 0x5eedULL, k);
    rep.entries.push_back(record(SearchSource::kControlQuadrilateral, k,
                                 canonical_to_state(sample_zero_bloch_manifold(ZeroBlochFamily::kQuadrilateral, rng))));
    rep.entries.push_back(record(SearchSource::kControlHNonzero, k,
                                 canonical_to_state(sample_zero_bloch_manifold(ZeroBlochFamily::kHNonzero, rng))));
  }
  rep.entries.push_back(record(SearchSource::kControlGhz, 0, ghz_state(std::numbers::pi / 4, 3)));

  const PureState product = basis_state(3, 0);
  const std::array<double, 3> w_coeffs{1 / std::sqrt(3.0), 1 / std::sqrt(3.0), 1 / std::sqrt(3.0)};
  const PureState w = w_state(w_coeffs);

  auto refined = parallel_map(samples, [&](std::size_t i) {
    Rng rng = derive_rng(seed, i);
    const PureState start = haar_random_state(3, rng);
    SolverConfig local = cfg;
    local.seed = rng();
    auto g2_of = [&](const PureState& s) { return nearest_product_state(s, local).g_squared; };

    const double g_start = g2_of(start);
    const PureState& anchor = g_start < 0.5 ? product : w;
    double lo = 0.0;
    double hi = 1.0;
    PureState current = start;
    double g_current = g_start;
    for (int step = 0; step < 60 && std::abs(g_current - 0.5) > window; ++step) {
      const double mid = 0.5 * (lo + hi);
      current = detail::mix_states(start, anchor, mid);
      g_current = g2_of(current);
      // g^2 moves from g_start toward the anchor's value along the path.
      if ((g_current < 0.5) == (g_start < 0.5)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return SearchEntry{SearchSource::kHaar, i, g_current, min_bloch_length(current),
                       std::abs(g_current - 0.5) <= window};
  });
  rep.entries.insert(rep.entries.end(), refined.begin(), refined.end());
  return rep;
}

}  // namespace geoent
