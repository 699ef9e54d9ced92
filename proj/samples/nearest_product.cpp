// Maximal product overlap of a few named states.

#include <cstdio>
#include <numbers>

#include "geoent/geoent.hpp"

int main() {
  using namespace geoent;
  const double c = 1.0 / std::sqrt(3.0);
  const std::array<double, 3> w{c, c, c};

  const std::pair<const char*, PureState> states[] = {
      {"GHZ", ghz_state(std::numbers::pi / 4, 3)},
      {"W", w_state(w)},
      {"Dicke(4,2)", dicke4_state()},
      {"Haar #1", haar_random_state(3, 1)},
  };
  for (const auto& [name, s] : states) {
    const auto r = nearest_product_state(s);
    std::printf("%-11s g^2 = %.12f  E_g = %.6f\n", name, r.g_squared, geometric_measure(r.g_squared));
  }
}
