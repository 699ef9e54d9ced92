// geoent: invariants, product overlap, canonical form and theorem campaigns
// for small qubit states.
//
// Exit codes: 0 success, 1 verification failure, 2 input error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "geoent/geoent.hpp"

using namespace geoent;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerification = 1;
constexpr int kExitInput = 2;

/// Bad user input; reported with exit code 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Format { kHuman, kStructured };

struct Options {
  std::string input;
  std::string builtin;
  bool normalize = false;
  Format format = Format::kHuman;

  std::optional<int> restarts;
  std::optional<int> max_iters;
  std::optional<double> tol;
  std::uint64_t seed = 0;

  std::size_t samples = 1000;
  std::string family = "both";
  double tolerance = kTheoremTolerance;
  std::string demo;
};

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string vec(const Eigen::Vector3d& v) { return "(" + num(v.x()) + ", " + num(v.y()) + ", " + num(v.z()) + ")"; }

std::string complex_str(Complex z) {
  if (z.imag() == 0.0) return num(z.real());
  return num(z.real()) + (z.imag() < 0 ? " - " : " + ") + num(std::abs(z.imag())) + "i";
}

json to_json(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

json to_json(const Eigen::Matrix3d& m) {
  json rows = json::array();
  for (int i = 0; i < 3; ++i) rows.push_back(json::array({m(i, 0), m(i, 1), m(i, 2)}));
  return rows;
}

json to_json(const Spinor& q) {
  return json::array({json::array({q(0).real(), q(0).imag()}), json::array({q(1).real(), q(1).imag()})});
}

json to_json(const CanonicalParams& p) {
  return {{"a", p.a}, {"b", p.b}, {"c", p.c}, {"d", p.d}, {"h", p.h}, {"gamma", p.gamma}};
}

std::string params_str(const CanonicalParams& p) {
  return "a=" + num(p.a) + " b=" + num(p.b) + " c=" + num(p.c) + " d=" + num(p.d) + " h=" + num(p.h) +
         " gamma=" + num(p.gamma);
}

void print_json(const json& doc) { std::cout << doc.dump(2) << "\n"; }

SolverConfig solver_config(const Options& o, SolverConfig base) {
  if (o.restarts) base.restarts = *o.restarts;
  if (o.max_iters) base.max_iterations = *o.max_iters;
  if (o.tol) base.tolerance = *o.tol;
  base.seed = o.seed;
  try {
    base.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  return base;
}

// ---------------------------------------------------------------------------
// State input

CanonicalParams parse_canonical_args(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError("canonical: cannot parse '" + item + "' as a number");
    }
  }
  if (v.size() != 6) throw InputError("canonical: expected six values a,b,c,d,h,gamma");
  return {v[0], v[1], v[2], v[3], v[4], v[5]};
}

PureState builtin_state(const std::string& name) {
  if (name == "ghz") return ghz_state(std::numbers::pi / 4, 3);
  if (name == "w") {
    const double r = 1.0 / std::sqrt(3.0);
    const std::array<double, 3> c{r, r, r};
    return w_state(c);
  }
  if (name == "dicke4") return dicke4_state();
  constexpr std::string_view prefix = "canonical:";
  if (name.rfind(prefix, 0) == 0) {
    try {
      return canonical_to_state(parse_canonical_args(name.substr(prefix.size())));
    } catch (const std::invalid_argument& e) {
      throw InputError(std::string("canonical: ") + e.what());
    }
  }
  throw InputError("unknown builtin '" + name + "' (expected ghz, w, dicke4 or canonical:a,b,c,d,h,gamma)");
}

PureState load_state(const Options& o) {
  if (o.input.empty() == o.builtin.empty()) throw InputError("give exactly one of --input or --builtin");
  if (!o.builtin.empty()) return builtin_state(o.builtin);

  std::ifstream in(o.input);
  if (!in) throw InputError("cannot open " + o.input);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    auto parsed = parse_state_json(buf.str(), {.allow_unnormalized = o.normalize});
    if (parsed.warning) std::cerr << "warning: " << *parsed.warning << "\n";
    return std::move(parsed.state);
  } catch (const StateFormatError& e) {
    throw InputError(o.input + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(o.input + ": " + e.what());
  }
}

PureState load_three_qubits(const Options& o, const char* command) {
  PureState s = load_state(o);
  if (s.n_qubits() != 3) {
    throw InputError(std::string(command) + " needs a 3-qubit state, got " + std::to_string(s.n_qubits()) +
                     " qubits (the overlap command accepts 2-8)");
  }
  return s;
}

// ---------------------------------------------------------------------------
// Commands

int run_invariants(const Options& o) {
  const PureState s = load_three_qubits(o, "invariants");
  const InvariantSet inv = invariant_set(s);
  const std::array<BlochVector, 3> bloch{bloch_vector(s, 0), bloch_vector(s, 1), bloch_vector(s, 2)};
  const CorrelationMatrix g = correlation_matrix(s, 0, 1);
  if (o.format == Format::kStructured) {
    print_json({{"b_A", inv.b_a},
                {"b_B", inv.b_b},
                {"b_C", inv.b_c},
                {"t", inv.t},
                {"tau", inv.tau},
                {"bloch_vectors", {to_json(bloch[0]), to_json(bloch[1]), to_json(bloch[2])}},
                {"correlation_AB", to_json(g)}});
    return kExitOk;
  }
  std::cout << "b_A = " << num(inv.b_a) << "\nb_B = " << num(inv.b_b) << "\nb_C = " << num(inv.b_c)
            << "\nt   = " << num(inv.t) << "\ntau = " << num(inv.tau) << "\n";
  const char* names = "ABC";
  for (std::size_t q = 0; q < 3; ++q) std::cout << "Bloch " << names[q] << " = " << vec(bloch[q]) << "\n";
  std::cout << "G (AB) =\n";
  for (int i = 0; i < 3; ++i) std::cout << "  " << vec(g.row(i).transpose()) << "\n";
  return kExitOk;
}

int run_overlap(const Options& o) {
  const PureState s = load_state(o);
  if (s.n_qubits() < 2) throw InputError("overlap needs at least 2 qubits");
  const OverlapResult r = nearest_product_state(s, solver_config(o, SolverConfig{}));
  const double e_g = geometric_measure(r.g_squared);
  if (o.format == Format::kStructured) {
    json spinors = json::array();
    for (const auto& q : r.product.spinors()) spinors.push_back(to_json(q));
    json doc = {{"n_qubits", s.n_qubits()},
                {"g_squared", r.g_squared},
                {"geometric_measure", e_g},
                {"product_spinors", spinors},
                {"converged", r.converged},
                {"iterations", r.iterations},
                {"restarts_used", r.restarts_used}};
    if (r.stationarity_residual) doc["stationarity_residual"] = *r.stationarity_residual;
    if (r.lagrange) doc["lagrange"] = {{"lambda1", r.lagrange->lambda1}, {"lambda2", r.lagrange->lambda2}};
    print_json(doc);
  } else {
    std::cout << "g^2 = " << num(r.g_squared) << "\nE_g = " << num(e_g) << "\n";
    for (std::size_t k = 0; k < s.n_qubits(); ++k) {
      const auto& q = r.product[k];
      std::cout << "q" << k << " = " << complex_str(q(0)) << " |0> + (" << complex_str(q(1)) << ") |1>\n";
    }
    if (r.lagrange) std::cout << "lambda1 = " << num(r.lagrange->lambda1) << "\nlambda2 = " << num(r.lagrange->lambda2) << "\n";
    if (r.stationarity_residual) std::cout << "stationarity residual = " << num(*r.stationarity_residual) << "\n";
    std::cout << "converged = " << (r.converged ? "yes" : "no") << " (" << r.iterations << " sweeps, "
              << r.restarts_used << " starts)\n";
  }
  if (!r.converged) std::cerr << "warning: the best start did not meet the convergence tolerance\n";
  return kExitOk;
}

int run_canonicalize(const Options& o) {
  const PureState s = load_three_qubits(o, "canonicalize");
  CanonicalForm form;
  try {
    form = canonicalize(s, solver_config(o, canonicalize_config()));
  } catch (const CanonicalizationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerification;
  }
  if (o.format == Format::kStructured) {
    json factors = json::array();
    for (const auto& u : form.transform.factors) {
      json m = json::array();
      for (int i = 0; i < 2; ++i) {
        m.push_back(json::array({json::array({u(i, 0).real(), u(i, 0).imag()}),
                                 json::array({u(i, 1).real(), u(i, 1).imag()})}));
      }
      factors.push_back(m);
    }
    print_json({{"params", to_json(form.params)},
                {"residual", form.residual},
                {"local_unitary", factors},
                {"canonical_state", state_to_json(canonical_to_state(form.params))}});
  } else {
    std::cout << params_str(form.params) << "\nresidual = " << num(form.residual) << "\n";
  }
  return kExitOk;
}

std::vector<ZeroBlochFamily> families(const std::string& name) {
  if (name == "quadrilateral") return {ZeroBlochFamily::kQuadrilateral};
  if (name == "h-nonzero") return {ZeroBlochFamily::kHNonzero};
  if (name == "both") return {ZeroBlochFamily::kQuadrilateral, ZeroBlochFamily::kHNonzero};
  throw InputError("unknown family '" + name + "' (expected quadrilateral, h-nonzero or both)");
}

int run_verify_theorem(const Options& o) {
  const auto fams = families(o.family);
  const SolverConfig cfg = solver_config(o, campaign_solver_config());
  bool all_passed = true;
  json reports = json::array();
  for (auto family : fams) {
    const auto rep = run_theorem_campaign(family, o.samples, o.seed, o.tolerance, cfg);
    all_passed = all_passed && rep.passed();
    if (o.format == Format::kStructured) {
      json failures = json::array();
      for (const auto& f : rep.failures) {
        failures.push_back({{"index", f.index},
                            {"params", to_json(f.report.params)},
                            {"numeric_g_squared", f.report.numeric_g_squared},
                            {"closed_form_g_squared", f.report.closed_form_g_squared}});
      }
      reports.push_back({{"family", to_string(family)},
                         {"samples", rep.samples},
                         {"seed", rep.seed},
                         {"tolerance", rep.tolerance},
                         {"max_abs_g_squared_minus_half", rep.max_deviation},
                         {"max_abs_t", rep.max_abs_t},
                         {"max_zero_mode_residual", rep.max_zero_mode_residual},
                         {"max_zero_bloch", rep.max_zero_bloch},
                         {"passed", rep.passed()},
                         {"failures", failures}});
      continue;
    }
    std::cout << "family " << to_string(family) << ": " << rep.samples << " samples, seed " << rep.seed
              << ", tolerance " << num(rep.tolerance) << "\n"
              << "  max |g^2 - 1/2|         = " << num(rep.max_deviation) << "\n"
              << "  max |t|                 = " << num(rep.max_abs_t) << "\n"
              << "  max zero-mode residual  = " << num(rep.max_zero_mode_residual) << "\n"
              << "  max |b| of zero qubit   = " << num(rep.max_zero_bloch) << "\n"
              << "  " << (rep.passed() ? "PASS" : "FAIL") << " (" << rep.failures.size() << " failures)\n";
    for (const auto& f : rep.failures) {
      std::cout << "    sample " << f.index << ": " << params_str(f.report.params)
                << " numeric g^2=" << num(f.report.numeric_g_squared)
                << " closed g^2=" << num(f.report.closed_form_g_squared) << "\n";
    }
  }
  if (o.format == Format::kStructured) print_json({{"campaigns", reports}, {"passed", all_passed}});
  return all_passed ? kExitOk : kExitVerification;
}

int demo_ghz_sweep(const Options& o) {
  const SolverConfig cfg = solver_config(o, SolverConfig{});
  json rows = json::array();
  bool ok = true;
  if (o.format == Format::kHuman) std::cout << "n  theta/pi        numeric g^2     (1+|b|)/2\n";
  for (std::size_t n = 2; n <= 5; ++n) {
    for (int k = 0; k <= 3; ++k) {
      const double theta = k * std::numbers::pi / 12;
      const double numeric = nearest_product_state(ghz_state(theta, n), cfg).g_squared;
      const double formula = ghz_overlap(theta, n);
      ok = ok && std::abs(numeric - formula) <= 1e-8;
      rows.push_back({{"n", n}, {"theta", theta}, {"numeric_g_squared", numeric}, {"formula_g_squared", formula}});
      if (o.format == Format::kHuman) {
        std::printf("%zu  %-14s  %-14s  %s\n", n, num(k / 12.0).c_str(), num(numeric).c_str(), num(formula).c_str());
      }
    }
  }
  if (o.format == Format::kStructured) print_json({{"demo", "ghz-sweep"}, {"rows", rows}, {"agree", ok}});
  return ok ? kExitOk : kExitVerification;
}

int demo_wn(const Options& o) {
  const SolverConfig cfg = solver_config(o, SolverConfig{});
  const double r6 = 1.0 / std::sqrt(6.0);
  const std::vector<std::vector<double>> cases = {
      {1 / std::sqrt(3.0), 1 / std::sqrt(3.0), 1 / std::sqrt(3.0)},
      {1 / std::sqrt(2.0), 0.5, 0.5},
      {1.0, 0.0, 0.0},
      {1 / std::sqrt(2.0), r6, r6, r6},
      {0.5, 0.5, 0.5, 0.5},
      {std::sqrt(0.5), std::sqrt(0.125), std::sqrt(0.125), std::sqrt(0.125), std::sqrt(0.125)},
  };
  json rows = json::array();
  bool ok = true;
  for (const auto& c : cases) {
    const auto rep = wn_overlap(c, cfg);
    ok = ok && rep.correspondence_holds;
    rows.push_back({{"coeffs", rep.coeffs},
                    {"g_squared", rep.g_squared},
                    {"bloch_lengths", rep.bloch_lengths},
                    {"has_zero_bloch", rep.has_zero_bloch},
                    {"correspondence_holds", rep.correspondence_holds}});
    if (o.format == Format::kHuman) {
      std::cout << "c = (";
      for (std::size_t i = 0; i < c.size(); ++i) std::cout << (i ? ", " : "") << num(c[i]);
      std::cout << ")  g^2 = " << num(rep.g_squared) << "  zero Bloch: " << (rep.has_zero_bloch ? "yes" : "no")
                << "  g^2 = 1/2: " << (rep.g_squared_is_half ? "yes" : "no") << "\n";
    }
  }
  if (o.format == Format::kStructured) print_json({{"demo", "wn"}, {"rows", rows}, {"correspondence", ok}});
  return ok ? kExitOk : kExitVerification;
}

int demo_dicke4(const Options& o) {
  const PureState s = dicke4_state();
  const double g2 = nearest_product_state(s, solver_config(o, SolverConfig{})).g_squared;
  std::vector<double> bloch;
  for (std::size_t q = 0; q < 4; ++q) bloch.push_back(bloch_vector(s, q).norm());
  const bool zero = *std::max_element(bloch.begin(), bloch.end()) <= 1e-12;
  if (o.format == Format::kStructured) {
    print_json({{"demo", "dicke4"}, {"g_squared", g2}, {"bloch_lengths", bloch}, {"all_bloch_zero", zero}});
  } else {
    std::cout << "g^2=" << num(g2) << ", all Bloch vectors " << (zero ? "zero" : "NOT zero")
              << ", theorem does NOT extend to four qubits\n";
  }
  return std::abs(g2 - 0.375) <= 1e-7 && zero ? kExitOk : kExitVerification;
}

int demo_quadrilateral(const Options& o) {
  const SolverConfig cfg = solver_config(o, campaign_solver_config());
  Rng rng(o.seed);
  double worst = 0.0;
  std::size_t count = 0;
  json rows = json::array();
  while (count < 100) {
    Eigen::Vector4d v;
    for (int k = 0; k < 4; ++k) v(k) = std::abs(complex_gaussian(rng).real());
    v.normalize();
    const QuadrilateralParams p{v(0), v(1), v(2), v(3)};
    if (!p.closed_form_applies()) continue;
    const double closed = quadrilateral_overlap(p);
    const double numeric = std::sqrt(nearest_product_state(quadrilateral_state(p), cfg).g_squared);
    worst = std::max(worst, std::abs(closed - numeric));
    rows.push_back({{"a", p.a}, {"b", p.b}, {"c", p.c}, {"d", p.d}, {"closed_g", closed}, {"numeric_g", numeric}});
    ++count;
  }
  const bool ok = worst <= 1e-7;
  if (o.format == Format::kStructured) {
    print_json({{"demo", "quadrilateral"}, {"rows", rows}, {"max_discrepancy", worst}, {"agree", ok}});
  } else {
    std::cout << count << " feasible quadrilateral states, max |2R - g_numeric| = " << num(worst) << "\n";
  }
  return ok ? kExitOk : kExitVerification;
}

int run_demo(const Options& o) {
  if (o.demo == "ghz-sweep") return demo_ghz_sweep(o);
  if (o.demo == "wn") return demo_wn(o);
  if (o.demo == "dicke4") return demo_dicke4(o);
  if (o.demo == "quadrilateral") return demo_quadrilateral(o);
  throw InputError("unknown demo '" + o.demo + "' (expected ghz-sweep, wn, dicke4 or quadrilateral)");
}

int run_inverse_search(const Options& o) {
  const auto rep = inverse_search(o.samples, o.seed);
  const auto filtered = rep.filtered_min_bloch();
  auto quantile = [&](double q) {
    if (filtered.empty()) return 0.0;
    return filtered[static_cast<std::size_t>(q * static_cast<double>(filtered.size() - 1))];
  };
  if (o.format == Format::kStructured) {
    json entries = json::array();
    for (const auto& e : rep.entries) {
      entries.push_back({{"source", to_string(e.source)},
                         {"index", e.index},
                         {"g_squared", e.g_squared},
                         {"min_bloch", e.min_bloch},
                         {"on_target", e.on_target}});
    }
    print_json({{"samples", rep.samples},
                {"seed", rep.seed},
                {"window", rep.window},
                {"filtered_min_bloch", filtered},
                {"entries", entries}});
    return kExitOk;
  }
  std::cout << "controls:\n";
  for (const auto& e : rep.entries) {
    if (e.source == SearchSource::kHaar) continue;
    std::cout << "  " << to_string(e.source) << " g^2=" << num(e.g_squared) << " min|b|=" << num(e.min_bloch)
              << "\n";
  }
  std::cout << filtered.size() << " of " << rep.samples << " Haar samples refined to |g^2 - 1/2| <= "
            << num(rep.window) << "\n";
  if (!filtered.empty()) {
    std::cout << "min Bloch length: min " << num(filtered.front()) << ", q25 " << num(quantile(0.25)) << ", median "
              << num(quantile(0.5)) << ", q75 " << num(quantile(0.75)) << ", max " << num(filtered.back()) << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

void add_state_flags(CLI::App* cmd, Options& o) {
  auto* in = cmd->add_option("--input", o.input, "JSON state file");
  auto* bi = cmd->add_option("--builtin", o.builtin, "ghz, w, dicke4 or canonical:a,b,c,d,h,gamma");
  in->excludes(bi);
  cmd->add_flag("--normalize", o.normalize, "accept and normalize inputs whose norm is off by more than 1e-6");
}

void add_solver_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--restarts", o.restarts, "random starts besides the basis start")->check(CLI::PositiveNumber);
  cmd->add_option("--max-iters", o.max_iters, "sweeps per start")->check(CLI::PositiveNumber);
  cmd->add_option("--tol", o.tol, "stop when a sweep raises g^2 by less than this")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "random seed");
}

void add_format_flag(CLI::App* cmd, Options& o) {
  cmd->add_option("--format", o.format, "human or structured")
      ->transform(CLI::CheckedTransformer(std::map<std::string, Format>{{"human", Format::kHuman},
                                                                        {"structured", Format::kStructured}}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometric entanglement of few-qubit states"};
  app.require_subcommand(1, 1);
  Options o;

  auto* inv = app.add_subcommand("invariants", "Bloch vectors, correlation matrix, t and tau of a 3-qubit state");
  add_state_flags(inv, o);
  add_format_flag(inv, o);

  auto* ovl = app.add_subcommand("overlap", "maximal product overlap g^2 and nearest product state");
  add_state_flags(ovl, o);
  add_solver_flags(ovl, o);
  add_format_flag(ovl, o);

  auto* can = app.add_subcommand("canonicalize", "canonical parameters (a, b, c, d, h, gamma) of a 3-qubit state");
  add_state_flags(can, o);
  add_solver_flags(can, o);
  add_format_flag(can, o);

  auto* ver = app.add_subcommand("verify-theorem", "check g^2 = 1/2 on sampled states with a zero Bloch vector");
  ver->add_option("--family", o.family, "quadrilateral, h-nonzero or both");
  ver->add_option("--samples", o.samples, "samples per family");
  ver->add_option("--tolerance", o.tolerance, "pass threshold on |g^2 - 1/2|");
  add_solver_flags(ver, o);
  add_format_flag(ver, o);

  auto* demo = app.add_subcommand("demo", "ghz-sweep, wn, dicke4 or quadrilateral");
  demo->add_option("name", o.demo, "demo name")->required();
  add_solver_flags(demo, o);
  add_format_flag(demo, o);

  auto* inverse = app.add_subcommand("inverse-search", "distribution of min Bloch length among g^2 = 1/2 states");
  inverse->add_option("--samples", o.samples, "Haar samples");
  inverse->add_option("--seed", o.seed, "random seed");
  add_format_flag(inverse, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*inv) return run_invariants(o);
    if (*ovl) return run_overlap(o);
    if (*can) return run_canonicalize(o);
    if (*ver) return run_verify_theorem(o);
    if (*demo) return run_demo(o);
    if (*inverse) return run_inverse_search(o);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::logic_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerification;
  }
  return kExitInput;
}
