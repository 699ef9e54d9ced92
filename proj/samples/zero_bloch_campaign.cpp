// States with one maximally mixed qubit: closed forms against the solver.

#include <cstdio>

#include "geoent/geoent.hpp"

int main() {
  using namespace geoent;

  const CanonicalParams p{0.3, 0.4, 0.0, std::sqrt(0.5), 0.5, 0.0};
  const BranchReport br = svd_branch_solutions(p);
  std::printf("zero mode g^2 = %.9f, main branch g^2 = %.9f (lambda %.2f, %.2f)\n", br.zero_mode.g_squared,
              br.main_branch.g_squared, br.main_branch.lambda1, br.main_branch.lambda2);

  const QuadrilateralParams q{0.7, 0.5, 0.4, std::sqrt(0.1)};
  std::printf("quadrilateral g = 2R = %.12f\n", quadrilateral_overlap(q));

  for (auto family : {ZeroBlochFamily::kQuadrilateral, ZeroBlochFamily::kHNonzero}) {
    const CampaignReport rep = run_theorem_campaign(family, 500, 7);
    std::printf("%-14s 500 samples, max |g^2 - 1/2| = %.2e, %s\n", std::string(to_string(family)).c_str(),
                rep.max_deviation, rep.passed() ? "all pass" : "FAILURES");
  }
}
