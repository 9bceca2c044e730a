#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "occtime/errors.hpp"
#include "occtime/omega_scale.hpp"
#include "occtime/scale_function.hpp"

namespace occtime {
namespace {

const LevyModeld kBrownianZeroDrift = LevyModeld::brownian(0.0, std::sqrt(2.0));
const LevyModeld kBrownian = LevyModeld::brownian(1.0, std::sqrt(2.0));
const LevyModeld kCl = LevyModeld::cramer_lundberg(2.0, 1.0, 1.0);

// W^omega(1, 0) and Zhat(1, 0) for CL(2, 1, 1) with omega = 1 on [0, 0.5), 0 above.
constexpr double kClOneStepW = 0.90440225230614283;
constexpr double kClOneStepZhat = 1.3183947428700255;

TEST(AlignedStep, DividesEveryLength) {
  const double lengths[] = {0.5, 0.3};
  const double h = aligned_step(1e-3, lengths);
  EXPECT_LE(h, 1e-3);
  for (double L : lengths) EXPECT_NEAR(L / h, std::round(L / h), 1e-9 * L / h);
  const double odd[] = {0.5, 0.5 + 1e-7};
  EXPECT_THROW(aligned_step(1e-3, odd), ConfigError);
  EXPECT_THROW(aligned_step(0.0, lengths), ConfigError);
}

TEST(OmegaScaleGrid, RejectsCoarseMesh) {
  EXPECT_THROW(solve_omega_scale(kCl, WeightFunction::constant(1), 1.0, 0.2), ConfigError);
  EXPECT_THROW(solve_omega_scale(kCl, WeightFunction::constant(1), -1.0, 0.01), DomainError);
}

TEST(OmegaScaleGrid, ZeroWeightReproducesScaleFunction) {
  for (const auto& m : {kBrownian, kCl}) {
    const auto g = solve_omega_scale(m, WeightFunction::constant(0.0), 1.0, 0.01);
    const ScaleEvald s(m, 0.0);
    for (std::size_t i = 0; i < g.nodes(); ++i)
      for (std::size_t j = 0; j <= i; ++j) {
        EXPECT_NEAR(g.w(i, j), s.W(g.node(i - j)), 1e-14);
        EXPECT_EQ(g.z_hat(i, j), 1.0);
      }
    EXPECT_NEAR(partial_w2(g, 1.0, 0.0), -s.W_prime(1.0), 1e-12);
  }
  const auto g = solve_omega_scale(kCl, WeightFunction::constant(0.0), 1.0, 1e-3);
  EXPECT_NEAR(partial_w2(g, 1.0, 0.0), -0.25 * std::exp(-0.5), 1e-12);
}

TEST(OmegaScaleGrid, ConstantWeightIsClassical) {
  const auto g = solve_omega_scale(kBrownianZeroDrift, WeightFunction::constant(1.0), 1.0, 1e-3);
  EXPECT_NEAR(g.w(g.index_of(1.0), 0), std::sinh(1.0), 1e-6);
  EXPECT_NEAR(partial_w2(g, 1.0, 0.0), -std::cosh(1.0), 1e-5);
  EXPECT_NEAR(z_hat(g, 1.0, 0.0), std::cosh(1.0), 1e-6);
  EXPECT_NEAR(z_hat(g, 0.7, 0.2), std::cosh(0.5), 1e-6);
  EXPECT_NEAR(g.w(g.index_of(0.9), g.index_of(0.35)), std::sinh(0.55), 1e-6);

  // Zhat_1 + Zhat_2 vanishes for a constant weight.
  for (double x : {0.25, 0.5, 1.0}) EXPECT_NEAR(z_hat_1(g, x, 0.0) + z_hat_2(g, x, 0.0), 0.0, 1e-5);
}

TEST(OmegaScaleGrid, OneStepMatchesReference) {
  const auto g = solve_omega_scale(kCl, WeightFunction::one_step(1.0, 0.0, 0.5), 1.0, 1e-3);
  EXPECT_NEAR(g.w(g.index_of(1.0), 0), kClOneStepW, 1e-6);
  EXPECT_NEAR(z_hat(g, 1.0, 0.0), kClOneStepZhat, 1e-6);
  EXPECT_DOUBLE_EQ(g.w_at_zero(), 0.5);
}

TEST(OmegaScaleGrid, BreakpointsAreNodes) {
  const auto g = solve_omega_scale(kCl, WeightFunction::step({0.7, 0.3}, {1.0, 0.0, 2.0}), 1.0, 1e-3);
  EXPECT_NO_THROW(g.index_of(0.7));
  EXPECT_NO_THROW(g.index_of(0.3));
  EXPECT_THROW(g.index_of(0.30031), DomainError);
}

class GridInvariants : public ::testing::TestWithParam<int> {};

TEST_P(GridInvariants, HoldAtEveryNode) {
  const LevyModeld m = GetParam() == 0 ? kBrownian : kCl;
  const auto lo = WeightFunction::step({1.0, 0.5}, {0.2, 0.5, 1.0});
  const auto hi = WeightFunction::step({1.0, 0.5}, {0.4, 0.5, 3.0});
  const auto g = solve_omega_scale(m, lo, 1.5, 5e-3);
  const auto g_hi = solve_omega_scale(m, hi, 1.5, 5e-3);
  const ScaleEvald s(m, 0.0);
  for (std::size_t i = 0; i < g.nodes(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      EXPECT_GE(g.w(i, j), s.W(g.node(i - j)) - 1e-14);
      EXPECT_GE(g.z_hat(i, j), 1.0);
      EXPECT_LE(g.w(i, j), g_hi.w(i, j));
    }
    EXPECT_EQ(g.z_hat(i, i + 1), 1.0);
  }
  EXPECT_LT(g.max_dual_residual(), 1e-4);
  EXPECT_FALSE(g.residual_alarm());
}

TEST_P(GridInvariants, W2MatchesDifferenceQuotient) {
  const LevyModeld m = GetParam() == 0 ? kBrownian : kCl;
  const auto omega = WeightFunction::one_step(1.0, 0.3, 0.5);
  const double h = 1e-3;
  const auto g = solve_omega_scale(m, omega, 1.0, h);
  double sup = 0.0;
  for (std::size_t i = 0; i < g.nodes(); ++i) sup = std::max(sup, std::abs(g.w2(i, 0)));
  for (double x : {0.4, 0.8, 1.0}) {
    for (double y : {0.1, 0.2, 0.7}) {
      if (y + 0.05 > x) continue;
      const std::size_t i = g.index_of(x), j = g.index_of(y);
      const double fd = (g.w(i, j + 1) - g.w(i, j)) / h;
      EXPECT_NEAR(g.w2(i, j), fd, 10.0 * h * sup) << "x=" << x << " y=" << y;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Models, GridInvariants, ::testing::Values(0, 1),
                         [](const auto& info) { return info.param == 0 ? "Brownian" : "CramerLundberg"; });

TEST(OmegaScaleGrid, DualResidualIsSecondOrder) {
  const auto omega = WeightFunction::step({0.75, 0.5, 0.25}, {0.2, 1.0, 0.5, 2.0});
  for (const auto& m : {kBrownian, kCl}) {
    const double coarse = solve_omega_scale(m, omega, 1.0, 2e-3).max_dual_residual();
    const double fine = solve_omega_scale(m, omega, 1.0, 1e-3).max_dual_residual();
    EXPECT_GT(coarse / fine, 3.5) << describe(m);
  }
}

TEST(OmegaColumn, AgreesWithGrid) {
  const auto omega = WeightFunction::step({0.9, 0.4}, {0.5, 2.0, 1.0});
  const auto g = solve_omega_scale(kCl, omega, 1.5, 1e-3);
  const auto col = solve_omega_column(kCl, omega, 0.3, 1.5, 1e-3);
  for (double x : {0.3, 0.5, 1.0, 1.5}) EXPECT_NEAR(col.at(x), g.w(g.index_of(x), g.index_of(0.3)), 1e-6);
}

TEST(ReflectedWeight, ResidualSmall) {
  EXPECT_LT(reflected_weight_check(kBrownian, WeightFunction::constant(0.8), 1.7, 1.2, 0.3), 1e-6);
  EXPECT_LT(reflected_weight_check(kBrownian, WeightFunction::one_step(1.0, 0.2, 0.6), 1.1, 1.1, 0.2), 1e-5);
  EXPECT_LT(reflected_weight_check(kCl, WeightFunction::step({1.0, 0.5}, {0.3, 1.5, 0.7}), 2.0, 1.5, 0.25),
            1e-5);
  EXPECT_THROW(reflected_weight_check(kCl, WeightFunction::constant(1), 1.0, 1.5, 0.2), DomainError);
}

TEST(IntegrateOnMesh, ExactForPiecewiseLinear) {
  const double v = integrate_on_mesh(0.1, 0.05, 0.93, [](double z, std::size_t) { return 3.0 * z + 1.0; });
  EXPECT_NEAR(v, 1.5 * (0.93 * 0.93 - 0.05 * 0.05) + 0.88, 1e-14);
}

}  // namespace
}  // namespace occtime
