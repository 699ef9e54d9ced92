#include "geoent/closed_form.hpp"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "geoent/invariants.hpp"
#include "geoent/random.hpp"
#include "oracles.hpp"

using namespace geoent;

namespace {

SolverConfig seeded(std::uint64_t seed) {
  SolverConfig cfg;
  cfg.seed = seed;
  cfg.restarts = 16;
  return cfg;
}

const QuadrilateralParams kSample{0.7, 0.5, 0.4, std::sqrt(0.1)};

}  // namespace

TEST(Quadrilateral, SampleOverlap) {
  ASSERT_TRUE(kSample.closed_form_applies());
  EXPECT_NEAR(quadrilateral_overlap(kSample), 0.7205007890895823, 1e-12);
  const double numeric = nearest_product_state(quadrilateral_state(kSample), seeded(1)).g_squared;
  EXPECT_NEAR(std::sqrt(numeric), 0.7205007890895823, 1e-9);
}

TEST(Quadrilateral, NearestProductStateAttainsOverlap) {
  const auto q = quadrilateral_nearest(kSample);
  EXPECT_NEAR(overlap_with_product(quadrilateral_state(kSample), q), quadrilateral_overlap(kSample), 1e-10);
}

TEST(Quadrilateral, SymmetricSquare) {
  // Square with side 1/2: R = 1/(2 sqrt 2), so g = 1/sqrt 2.
  const QuadrilateralParams sq{0.5, 0.5, 0.5, 0.5};
  EXPECT_NEAR(quadrilateral_overlap(sq), 1.0 / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(nearest_product_state(quadrilateral_state(sq), seeded(2)).g_squared, 0.5, 1e-10);
}

TEST(Quadrilateral, SquareNearestIsPlusStates) {
  const auto q = quadrilateral_nearest({0.5, 0.5, 0.5, 0.5});
  for (std::size_t k = 0; k < 3; ++k) EXPECT_LT((q[k] - Spinor(1, 1) / std::sqrt(2.0)).norm(), 1e-12);
}

TEST(Quadrilateral, SharedSampleHasHalfOverlap) {
  const QuadrilateralParams p{0.6, std::sqrt(0.14), 0.5, 0.5};
  ASSERT_TRUE(p.closed_form_applies());
  EXPECT_NEAR(std::pow(quadrilateral_overlap(p), 2), 0.5, 1e-10);
  EXPECT_NEAR(std::pow(shared_quadrilateral_overlap(p), 2), 0.5, 1e-12);
  // The general nearest state reduces to the simplified spinors.
  const auto general = quadrilateral_nearest(p);
  const auto simple = shared_quadrilateral_nearest(p);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(std::abs(general[k].dot(simple[k])), 1.0, 1e-10);
  EXPECT_LT((simple[0] - Spinor(std::sqrt(p.b * p.c), std::sqrt(p.a * p.d)) / std::sqrt(p.a * p.d + p.b * p.c)).norm(),
            1e-15);
}

TEST(Quadrilateral, SideBeyondSemiperimeterIsInfeasible) {
  const double small = std::sqrt((1.0 - 0.95 * 0.95) / 3.0);
  const QuadrilateralParams p{0.95, small, small, small};
  EXPECT_FALSE(p.sides_feasible());
  EXPECT_THROW(quadrilateral_overlap(p), InfeasibleClosedForm);
  EXPECT_THROW(quadrilateral_nearest(p), InfeasibleClosedForm);
  // The numeric solver still works: the dominant amplitude wins.
  EXPECT_NEAR(nearest_product_state(quadrilateral_state(p), seeded(3)).g_squared, 0.95 * 0.95, 1e-9);
}

TEST(Quadrilateral, NegativeCoefficientIsInfeasible) {
  // Sides are feasible but r_a < 0; the true overlap is the largest side.
  const double s = std::sqrt(0.12);
  const QuadrilateralParams p{0.8, s, s, s};
  EXPECT_TRUE(p.sides_feasible());
  EXPECT_LT(p.r_coefficients()[0], 0.0);
  EXPECT_GT(2.0 * p.circumradius(), 0.8);
  EXPECT_THROW(quadrilateral_overlap(p), InfeasibleClosedForm);
  EXPECT_NEAR(nearest_product_state(quadrilateral_state(p), seeded(4)).g_squared, 0.64, 1e-9);
}

TEST(Quadrilateral, RandomFeasibleMatchNumeric) {
  Rng rng(9);
  int checked = 0;
  while (checked < 40) {
    Eigen::Vector4d v = Eigen::Vector4d::NullaryExpr([&] { return std::abs(complex_gaussian(rng).real()); });
    v.normalize();
    const QuadrilateralParams p{v(0), v(1), v(2), v(3)};
    if (!p.closed_form_applies()) continue;
    ++checked;
    const auto s = quadrilateral_state(p);
    const double g = quadrilateral_overlap(p);
    EXPECT_NEAR(std::sqrt(nearest_product_state(s, seeded(checked)).g_squared), g, 1e-7);
    EXPECT_NEAR(overlap_with_product(s, quadrilateral_nearest(p)), g, 1e-10);
  }
}

TEST(Quadrilateral, RejectsInvalid) {
  EXPECT_THROW(quadrilateral_state({0.5, 0.5, 0.5, 0.6}), std::invalid_argument);
  EXPECT_THROW(quadrilateral_state({-0.5, 0.5, 0.5, 0.5}), std::invalid_argument);
  EXPECT_THROW(QuadrilateralParams::from_canonical({0.1, 0.1, 0.1, 0.9, 0.4, 0.0}), std::invalid_argument);
}

TEST(SharedQuadrilateral, AlgebraicIdentity) {
  // (ac + bd)(bc + ad) = (c^2 + d^2) ab + (a^2 + b^2) cd, for all a, b, c, d.
  Rng rng(10);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    const double lhs = (a * c + b * d) * (b * c + a * d);
    const double rhs = (c * c + d * d) * a * b + (a * a + b * b) * c * d;
    EXPECT_NEAR(lhs, rhs, 1e-12 * (1.0 + std::abs(lhs)));
  }
}

TEST(SharedQuadrilateral, OverlapIsInverseSqrtTwo) {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const auto c = sample_zero_bloch_manifold(ZeroBlochFamily::kQuadrilateral, rng);
    const auto p = QuadrilateralParams::from_canonical(c);
    ASSERT_TRUE(is_shared_quadrilateral(p));
    if (std::min({p.a, p.b, p.c, p.d}) < 1e-3) continue;
    EXPECT_NEAR(shared_quadrilateral_overlap(p), 1.0 / std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(overlap_with_product(quadrilateral_state(p), shared_quadrilateral_nearest(p)), 1.0 / std::sqrt(2.0),
                1e-12);
  }
  EXPECT_THROW(shared_quadrilateral_overlap(kSample), std::invalid_argument);
}

TEST(SvdBranches, Example) {
  const CanonicalParams p{0.3, 0.4, 0.0, std::sqrt(0.5), 0.5, 0.0};
  const auto r = svd_branch_solutions(p);
  EXPECT_NEAR(r.b_a, 0.349857113690718, 1e-12);
  EXPECT_NEAR(r.b_b, 0.512249938994630, 1e-12);
  EXPECT_NEAR(r.zero_mode.g_squared, 0.465526763171337, 1e-12);
  EXPECT_NEAR(r.main_branch.lambda1, 0.68, 1e-14);
  EXPECT_NEAR(r.main_branch.lambda2, 0.82, 1e-14);
  EXPECT_NEAR(r.main_branch.lambda1_mu_form, 0.68, 1e-12);
  EXPECT_NEAR(r.main_branch.lambda2_mu_form, 0.82, 1e-12);
  EXPECT_NEAR(r.main_branch.g_squared, 0.5, 1e-12);
  EXPECT_LT(r.main_branch.residual, 1e-12);
  EXPECT_LT(r.zero_mode.residual, 1e-12);
  EXPECT_TRUE(r.middle_branch.nonphysical);
  EXPECT_GT(r.middle_branch.bloch_product, r.middle_branch.multiplier_product);
  EXPECT_NEAR(r.final_g_squared, 0.5, 1e-12);
}

TEST(SvdBranches, FactorizationAndZeroMode) {
  Rng rng(12);
  for (int i = 0; i < 200; ++i) {
    const auto p = sample_zero_bloch_manifold(ZeroBlochFamily::kHNonzero, rng);
    const auto s = canonical_to_state(p);
    const auto r = svd_branch_solutions(p);
    const CorrelationMatrix g = correlation_matrix(s, 0, 1);
    EXPECT_LT((r.u * r.singular_values.asDiagonal() * r.v.transpose() - g).cwiseAbs().maxCoeff(), 1e-12);

    Eigen::JacobiSVD<Eigen::Matrix3d> svd(g);
    Eigen::Vector3d expected = r.singular_values;
    std::sort(expected.data(), expected.data() + 3, std::greater<>());
    EXPECT_LT((svd.singularValues() - expected).cwiseAbs().maxCoeff(), 1e-10);

    const BlochVector b_a = bloch_vector(s, 0);
    const BlochVector b_b = bloch_vector(s, 1);
    EXPECT_LT((g.transpose() * b_a).norm(), 1e-12);
    EXPECT_LT((g * b_b).norm(), 1e-12);
    EXPECT_LT((r.zero_mode.x - b_a.normalized()).norm(), 1e-10);
    EXPECT_LT((r.zero_mode.y - b_b.normalized()).norm(), 1e-10);
    EXPECT_NEAR(r.main_branch.g_squared, 0.5, 1e-12);
    EXPECT_LT(r.main_branch.residual, 1e-12);
    EXPECT_NEAR(r.main_branch.lambda1, r.main_branch.lambda1_mu_form, 1e-12);
    EXPECT_LE(r.zero_mode.g_squared, 0.5 + 1e-12);
    EXPECT_GT(r.zero_mode.deficit, 0.0);
    EXPECT_NEAR(0.5 - r.zero_mode.g_squared, r.zero_mode.deficit, 1e-15);
  }
}

TEST(SvdBranches, GhzLimit) {
  const double r = 1.0 / std::sqrt(2.0);
  const auto rep = svd_branch_solutions({0.0, 0.0, 0.0, r, r, 0.0});
  EXPECT_NEAR(rep.zero_mode.g_squared, 0.25, 1e-15);
  EXPECT_NEAR(rep.zero_mode.deficit, 0.25, 1e-15);
  EXPECT_NEAR(rep.main_branch.g_squared, 0.5, 1e-15);
  EXPECT_NEAR(rep.final_g_squared, 0.5, 1e-15);
}

TEST(SvdBranches, StrictGapNearVanishingH) {
  // 1/2 - g1^2 is fourth order in h: it must stay positive even when the
  // rounded g1^2 equals 1/2.
  const double h = 1e-5;
  const double a = 0.5;
  const double b = std::sqrt(0.5 - a * a - h * h);
  const auto rep = svd_branch_solutions({a, b, 0.0, std::sqrt(0.5), h, 0.0});
  EXPECT_GT(rep.zero_mode.deficit, 0.0);
  EXPECT_LT(rep.zero_mode.deficit, 1e-18);
}

TEST(SvdBranches, RejectsOtherFamilies) {
  EXPECT_THROW(svd_branch_solutions({0.3, 0.4, 0.1, std::sqrt(0.49), 0.5, 0.0}), std::invalid_argument);
  EXPECT_THROW(svd_branch_solutions({0.3, 0.4, 0.0, std::sqrt(0.5), 0.5, 0.3}), std::invalid_argument);
  EXPECT_THROW(svd_branch_solutions({0.3, 0.4, 0.0, 0.6, std::sqrt(0.39), 0.0}), std::invalid_argument);
}

TEST(TheoremCheck, BothFamiliesEveryZeroQubit) {
  Rng rng(13);
  for (auto family : {ZeroBlochFamily::kQuadrilateral, ZeroBlochFamily::kHNonzero}) {
    for (std::size_t zero_qubit = 0; zero_qubit < 3; ++zero_qubit) {
      for (int i = 0; i < 10; ++i) {
        const auto p = sample_zero_bloch_manifold(family, rng);
        const auto rep = theorem_check(p, family, seeded(rng()), zero_qubit);
        EXPECT_TRUE(rep.passed) << to_string(family) << " zero qubit " << zero_qubit << " dev " << rep.deviation();
        EXPECT_LE(rep.zero_bloch_length, 1e-12);
      }
    }
  }
  EXPECT_THROW(relabel_for_zero_qubit(3), std::out_of_range);
}

TEST(Ghz, OverlapFormulaAgainstNumeric) {
  for (std::size_t n = 2; n <= 5; ++n) {
    for (int k = 0; k <= 6; ++k) {
      const double theta = k * std::numbers::pi / 12;
      const double numeric = nearest_product_state(ghz_state(theta, n), seeded(k)).g_squared;
      EXPECT_NEAR(numeric, ghz_overlap(theta, n), 1e-10) << "n " << n << " k " << k;
    }
  }
  EXPECT_NEAR(ghz_overlap(std::numbers::pi / 4, 3), 0.5, 1e-15);
  EXPECT_NEAR(ghz_overlap(0.0, 4), 1.0, 1e-15);
  EXPECT_NEAR(ghz_overlap(std::numbers::pi / 6, 4), 0.75, 1e-15);
  EXPECT_THROW(ghz_state(0.1, 1), std::invalid_argument);
}

TEST(WStates, ThreeQubitValue) {
  const std::array<double, 3> c{1 / std::sqrt(3.0), 1 / std::sqrt(3.0), 1 / std::sqrt(3.0)};
  const auto rep = wn_overlap(c);
  EXPECT_NEAR(rep.g_squared, 4.0 / 9.0, 1e-10);
  EXPECT_FALSE(rep.has_zero_bloch);
  EXPECT_TRUE(rep.correspondence_holds);
}

TEST(WStates, ZeroBlochCorrespondence) {
  const double r6 = 1.0 / std::sqrt(6.0);
  const std::array<double, 4> half{1.0 / std::sqrt(2.0), r6, r6, r6};
  const auto rep = wn_overlap(half);
  EXPECT_NEAR(rep.g_squared, 0.5, 1e-10);
  EXPECT_TRUE(rep.has_zero_bloch);
  EXPECT_TRUE(rep.correspondence_holds);

  const std::array<double, 4> equal{0.5, 0.5, 0.5, 0.5};
  const auto eq = wn_overlap(equal);
  EXPECT_NEAR(eq.g_squared, 27.0 / 64.0, 1e-10);
  EXPECT_FALSE(eq.has_zero_bloch);
  EXPECT_TRUE(eq.correspondence_holds);

  const std::array<double, 3> three_half{1.0 / std::sqrt(2.0), 0.5, 0.5};
  const auto th = wn_overlap(three_half);
  EXPECT_NEAR(th.g_squared, 0.5, 1e-6);
  EXPECT_NEAR(th.bloch_lengths[0], 0.0, 1e-12);

  const std::array<double, 3> product{1.0, 0.0, 0.0};
  EXPECT_NEAR(wn_overlap(product).g_squared, 1.0, 1e-12);

  const std::array<double, 2> bad{0.5, 0.5};
  EXPECT_THROW(wn_overlap(bad), std::invalid_argument);
}

TEST(Dicke4, ValueAndZeroBloch) {
  const auto s = dicke4_state();
  EXPECT_NEAR(nearest_product_state(s, seeded(1)).g_squared, 0.375, 1e-10);
  for (std::size_t q = 0; q < 4; ++q) EXPECT_LE(bloch_vector(s, q).norm(), 1e-14);
  EXPECT_NEAR(s.input_norm(), 1.0, 1e-15);
}
