#include <gtest/gtest.h>

#include "occtime/errors.hpp"
#include "occtime/weight_function.hpp"

namespace occtime {
namespace {

TEST(WeightFunction, Validation) {
  EXPECT_THROW(WeightFunction::constant(-1.0), DomainError);
  EXPECT_THROW(WeightFunction::one_step(1.0, 0.0, 0.0), DomainError);
  EXPECT_THROW(WeightFunction::one_step(1.0, -0.1, 1.0), DomainError);
  EXPECT_THROW(WeightFunction::step({1.0, 2.0}, {0.0, 1.0, 2.0}), DomainError);
  EXPECT_THROW(WeightFunction::step({1.0}, {0.0}), DomainError);
  EXPECT_THROW(WeightFunction::step({1.0, -0.5}, {0.0, 1.0, 2.0}), DomainError);
}

TEST(WeightFunction, RightContinuousLevels) {
  const auto w = WeightFunction::one_step(1.0, 0.25, 0.5);
  EXPECT_EQ(w(0.0), 1.0);
  EXPECT_EQ(w(0.4999), 1.0);
  EXPECT_EQ(w(0.5), 0.25);
  EXPECT_EQ(w(9.0), 0.25);

  const auto s = WeightFunction::step({1.5, 1.0, 0.5}, {0.2, 1.0, 0.5, 2.0});
  EXPECT_EQ(s(0.0), 2.0);
  EXPECT_EQ(s(0.5), 0.5);
  EXPECT_EQ(s(1.0), 1.0);
  EXPECT_EQ(s(1.49), 1.0);
  EXPECT_EQ(s(1.5), 0.2);
}

TEST(WeightFunction, Integral) {
  const auto s = WeightFunction::step({1.5, 1.0, 0.5}, {0.2, 1.0, 0.5, 2.0});
  EXPECT_DOUBLE_EQ(s.integral(0.0, 2.0), 2.0 * 0.5 + 0.5 * 0.5 + 1.0 * 0.5 + 0.2 * 0.5);
  EXPECT_DOUBLE_EQ(s.integral(0.25, 0.75), 2.0 * 0.25 + 0.5 * 0.25);
  EXPECT_EQ(s.integral(1.0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(WeightFunction::constant(3.0).integral(1.0, 2.5), 4.5);
}

TEST(WeightFunction, JumpsSkipFlatBreakpoints) {
  const auto s = WeightFunction::step({2.0, 1.0, 0.5}, {1.0, 1.0, 0.0, 3.0});
  EXPECT_EQ(s.jumps(), (std::vector<double>{0.5, 1.0}));
  EXPECT_TRUE(WeightFunction::one_step(1.0, 1.0, 0.7).jumps().empty());
  EXPECT_EQ(WeightFunction::one_step(1.0, 1.0, 0.7).constant_level(), 1.0);
  EXPECT_FALSE(s.constant_level());
  EXPECT_EQ(s.sup(), 3.0);
}

TEST(WeightFunction, PlusShiftsEveryLevel) {
  const auto w = WeightFunction::one_step(1.0, 0.0, 0.5).plus(0.3);
  EXPECT_DOUBLE_EQ(w(0.1), 1.3);
  EXPECT_DOUBLE_EQ(w(0.9), 0.3);
  EXPECT_THROW(w.plus(-1.0), DomainError);
}

TEST(WeightFunction, ReflectionMirrorsOnInterval) {
  const auto s = WeightFunction::step({1.5, 1.0, 0.5}, {0.2, 1.0, 0.5, 2.0});
  const double u = 1.2;
  const auto r = s.reflected(u);
  for (double z = 0.013; z < u; z += 0.05) EXPECT_EQ(r(z), s(u - z)) << "z=" << z;
  EXPECT_EQ(WeightFunction::one_step(1.0, 0.0, 0.5).reflected(0.4).constant_level(), 1.0);
}

TEST(WeightFunction, Describe) {
  EXPECT_EQ(WeightFunction::one_step(1, 0, 0.5).describe(), "one_step(q=1, p=0, a=0.5)");
  EXPECT_EQ(WeightFunction::step({1}, {0, 2}).describe(), "step(breakpoints=[1], levels=[0,2])");
}

}  // namespace
}  // namespace occtime
