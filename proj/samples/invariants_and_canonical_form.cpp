// Local-unitary invariants of a random state, and its canonical form.

#include <cstdio>

#include "geoent/geoent.hpp"

int main() {
  using namespace geoent;
  const PureState s = haar_random_state(3, 2024);
  const InvariantSet inv = invariant_set(s);
  std::printf("b_A=%.6f b_B=%.6f b_C=%.6f t=%.6f tau=%.6f\n", inv.b_a, inv.b_b, inv.b_c, inv.t, inv.tau);

  const CanonicalForm form = canonicalize(s);
  const auto& p = form.params;
  std::printf("a=%.6f b=%.6f c=%.6f d=%.6f h=%.6f gamma=%.6f (residual %.1e)\n", p.a, p.b, p.c, p.d, p.h, p.gamma,
              form.residual);

  // Same orbit: the invariants of the canonical state agree.
  std::printf("invariant drift %.1e\n", max_abs_difference(inv, invariant_set(canonical_to_state(p))));
}
