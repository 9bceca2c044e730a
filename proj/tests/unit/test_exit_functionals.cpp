#include <cmath>
#include <tuple>

#include <gtest/gtest.h>

#include "occtime/errors.hpp"
#include "occtime/exit_functionals.hpp"
#include "occtime/scale_function.hpp"

namespace occtime {
namespace {

const LevyModeld kBrownianZeroDrift = LevyModeld::brownian(0.0, std::sqrt(2.0));
const LevyModeld kBrownian = LevyModeld::brownian(1.0, std::sqrt(2.0));
const LevyModeld kCl = LevyModeld::cramer_lundberg(2.0, 1.0, 1.0);

constexpr double kClassicalRatio = 0.62245933120185459;  // (1 - e^{-1/2}) / (1 - e^{-1})
constexpr double kBrownianResolvent = 0.44396057391472528;
constexpr double kClAtom = 0.43818661151050326;
constexpr double kClOneStepUp = 0.48921545440292797;
constexpr double kBrownianOneStepUp = 0.3824506802230776;

struct Solved {
  OmegaScaleGrid grid;
  HFunction h;
  Solved(const LevyModeld& m, const WeightFunction& w, double x_max, double mesh = 1e-3)
      : grid(solve_omega_scale(m, w, x_max, mesh)), h(grid) {}
};

TEST(HFunction, ZeroWeightIsNormalisedScaleFunction) {
  for (const auto& m : {kBrownian, kCl}) {
    const Solved s(m, WeightFunction::constant(0.0), 2.0);
    const ScaleEvald w(m, 0.0);
    EXPECT_DOUBLE_EQ(s.h(1.0), 1.0);
    for (double u : {0.1, 0.5, 1.5, 2.0}) EXPECT_NEAR(s.h(u), w.W(u) / w.W(1.0), 1e-7);
  }
}

TEST(HFunction, ConstantWeight) {
  const Solved s(kCl, WeightFunction::constant(0.8), 2.0);
  const ScaleEvald w(kCl, 0.8);
  for (double u : {0.25, 1.75}) EXPECT_NEAR(s.h(u), w.W(u) / w.W(1.0), 1e-7);
}

TEST(HFunction, BasePointInvariance) {
  const auto grid = solve_omega_scale(kCl, WeightFunction::one_step(1.0, 0.2, 0.5), 2.0);
  const HFunction h1(grid), h2(grid, 0.37);
  EXPECT_DOUBLE_EQ(h2(0.37), 1.0);
  for (double x : {0.1, 0.6, 1.3})
    EXPECT_NEAR(h1.log_ratio(x, 1.9), h2.log_ratio(x, 1.9), 1e-10);
  const auto short_grid = solve_omega_scale(kCl, WeightFunction::constant(1.0), 0.5);
  EXPECT_DOUBLE_EQ(HFunction(short_grid).base_point(), short_grid.x_max());
}

TEST(HFunction, Positive) {
  const Solved s(kBrownian, WeightFunction::step({1.5, 0.5}, {0.0, 4.0, 1.0}), 2.0);
  for (double u = 0.001; u <= 2.0; u += 0.0137) EXPECT_GT(s.h(u), 0.0);
  EXPECT_EQ(s.h(0.0), 0.0);
}

TEST(ExitLaplace, ClassicalZeroWeight) {
  const Solved s(kBrownian, WeightFunction::constant(0.0), 1.0);
  EXPECT_NEAR(up_exit_laplace(s.h, 0.5, 1.0), kClassicalRatio, 1e-7);
  EXPECT_NEAR(down_exit_laplace(s.grid, s.h, 0.5, 1.0), 1.0 - kClassicalRatio, 1e-7);
  EXPECT_EQ(up_exit_laplace(s.h, 1.0, 1.0), 1.0);
  EXPECT_NEAR(down_exit_laplace(s.grid, s.h, 1.0, 1.0), 0.0, 1e-15);
  EXPECT_EQ(up_exit_laplace(s.h, 0.0, 1.0), 0.0);
}

TEST(ExitLaplace, ZeroWeightExitIsCertain) {
  for (const auto& m : {kBrownian, kCl}) {
    const Solved s(m, WeightFunction::constant(0.0), 2.0);
    for (double x : {0.1, 0.9, 1.7})
      EXPECT_NEAR(up_exit_laplace(s.h, x, 2.0) + down_exit_laplace(s.grid, s.h, x, 2.0), 1.0, 1e-6);
  }
}

TEST(ExitLaplace, ConstantWeightBrownian) {
  const Solved s(kBrownianZeroDrift, WeightFunction::constant(1.0), 1.0);
  EXPECT_NEAR(up_exit_laplace(s.h, 0.5, 1.0), std::sinh(0.5) / std::sinh(1.0), 1e-7);
}

TEST(ExitLaplace, OneStepReferenceValues) {
  const Solved cl(kCl, WeightFunction::one_step(1.0, 0.0, 0.5), 2.0);
  EXPECT_NEAR(up_exit_laplace(cl.h, 1.0, 2.0), kClOneStepUp, 1e-6);
  const Solved bm(kBrownian, WeightFunction::one_step(1.0, 0.5, 0.5), 1.5);
  EXPECT_NEAR(up_exit_laplace(bm.h, 0.5, 1.5), kBrownianOneStepUp, 1e-6);
}

TEST(ExitLaplace, BoundsAndMonotonicity) {
  for (const auto& m : {kBrownian, kCl}) {
    const Solved lo(m, WeightFunction::one_step(0.5, 0.1, 0.7), 2.0);
    const Solved hi(m, WeightFunction::one_step(1.5, 0.1, 0.7), 2.0);
    for (double x : {0.2, 0.8, 1.4}) {
      const double up = up_exit_laplace(lo.h, x, 2.0), down = down_exit_laplace(lo.grid, lo.h, x, 2.0);
      EXPECT_GE(up, 0.0);
      EXPECT_GE(down, 0.0);
      EXPECT_LE(up + down, 1.0 + 1e-6);
      EXPECT_LE(up_exit_laplace(hi.h, x, 2.0), up);
    }
  }
}

TEST(ExitLaplace, RangeChecks) {
  const Solved s(kCl, WeightFunction::constant(0.0), 1.0);
  EXPECT_THROW(up_exit_laplace(s.h, 0.8, 0.5), DomainError);
  EXPECT_THROW(up_exit_laplace(s.h, 0.5, 1.5), DomainError);
  EXPECT_THROW(shifted_exit_laplace(s.grid, s.h, 0.1, 1.0, 0.2), DomainError);
}

TEST(ShiftedExit, TranslatesTheBand) {
  const Solved s(kBrownian, WeightFunction::constant(0.0), 1.0);
  const auto r = shifted_exit_laplace(s.grid, s.h, 1.5, 2.0, 1.0);
  EXPECT_NEAR(r.up, kClassicalRatio, 1e-7);
  EXPECT_NEAR(r.down, 1.0 - kClassicalRatio, 1e-7);
  EXPECT_EQ(shifted_exit_laplace(s.grid, s.h, 1.0, 2.0, 1.0).up, 0.0);
  const auto same = shifted_exit_laplace(s.grid, s.h, 0.5, 1.0);
  EXPECT_EQ(same.up, up_exit_laplace(s.h, 0.5, 1.0));
}

TEST(PotentialDensity, ReducesToClassicalResolvent) {
  EXPECT_NEAR(classical_sy_resolvent(kBrownian, 0.5, 1.0, 0.2), kBrownianResolvent, 1e-14);
  EXPECT_NEAR(classical_sy_atom(kCl, 0.5, 1.0), kClAtom, 1e-14);
  EXPECT_EQ(classical_sy_resolvent(kBrownian, 0.0, 1.0, 0.2), 0.0);
  for (const auto& m : {kBrownian, kCl}) {
    const Solved s(m, WeightFunction::constant(0.0), 2.0);
    for (auto [x, z, y] : {std::tuple{0.5, 1.0, 0.2}, std::tuple{0.0, 1.5, 1.0}, std::tuple{1.2, 1.9, 0.4}}) {
      EXPECT_NEAR(occupation_potential_density(s.grid, s.h, x, z, y, 2.0), classical_sy_resolvent(m, x, z, y),
                  1e-6);
      EXPECT_NEAR(atom_at_zero(s.grid, s.h, x, z), classical_sy_atom(m, x, z), 1e-7);
    }
  }
}

TEST(PotentialDensity, NonnegativeAndNoBrownianAtom) {
  for (const auto& m : {kBrownian, kCl}) {
    const Solved s(m, WeightFunction::step({1.2, 0.4}, {0.5, 2.0, 0.1}), 2.0);
    for (double z = 0.3; z < 2.0; z += 0.25)
      for (double y = 0.05; y < z; y += 0.1)
        EXPECT_GE(occupation_potential_density(s.grid, s.h, 0.2, z, y, 2.0), -1e-10);
    if (m.is_brownian()) EXPECT_EQ(atom_at_zero(s.grid, s.h, 0.3, 1.0), 0.0);
  }
}

TEST(OccupationClosure, BalancesExitTransforms) {
  for (const auto& m : {kBrownian, kCl}) {
    const Solved s(m, WeightFunction::one_step(1.0, 0.3, 0.5), 1.5);
    for (double x : {0.25, 0.75}) {
      const double gap = 1.0 - up_exit_laplace(s.h, x, 1.5) - down_exit_laplace(s.grid, s.h, x, 1.5);
      EXPECT_NEAR(occupation_closure(s.grid, s.h, x, 1.5), gap, 1e-4);
    }
  }
}

TEST(GerberShiu, MarginalIsDownExit) {
  const Solved s(kCl, WeightFunction::one_step(1.0, 0.0, 0.5), 2.0);
  EXPECT_NEAR(gerber_shiu_marginal(s.grid, s.h, 1.0, 2.0), down_exit_laplace(s.grid, s.h, 1.0, 2.0), 1e-4);
}

TEST(GerberShiu, ExponentialDeficitAndBrownianZero) {
  const double delta = 0.3;
  const Solved s(kCl, WeightFunction::constant(0.0).plus(delta), 2.0);
  const auto a = gerber_shiu_density(s.grid, s.h, 1.0, 0.6, 0.5, 2.0, delta);
  const auto b = gerber_shiu_density(s.grid, s.h, 1.0, 0.6, 1.5, 2.0, delta);
  EXPECT_GT(a.density, 0.0);
  EXPECT_NEAR(b.density / a.density, std::exp(-1.0), 1e-12);
  EXPECT_FALSE(a.no_jumps);

  const Solved bm(kBrownian, WeightFunction::constant(delta), 2.0);
  const auto zero = gerber_shiu_density(bm.grid, bm.h, 1.0, 0.6, 0.5, 2.0, delta);
  EXPECT_EQ(zero.density, 0.0);
  EXPECT_TRUE(zero.no_jumps);
}

TEST(GerberShiu, ReportsSnapDistance) {
  const Solved s(kCl, WeightFunction::constant(0.0), 2.0, 0.01);
  const auto v = gerber_shiu_density(s.grid, s.h, 1.0, 0.6031, 0.5, 2.0, 0.0);
  EXPECT_NEAR(v.z_used, 0.6, 1e-12);
  EXPECT_NEAR(v.snap_distance, 0.0031, 1e-12);
  EXPECT_THROW(gerber_shiu_density(s.grid, s.h, 1.0, 0.6, -1.0, 2.0, 0.0), DomainError);
}

}  // namespace
}  // namespace occtime
