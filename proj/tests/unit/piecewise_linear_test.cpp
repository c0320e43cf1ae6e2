#include <gtest/gtest.h>

#include <vector>

#include "hsalpha/errors.hpp"
#include "hsalpha/piecewise_linear.hpp"

using namespace hsalpha;

TEST(PiecewiseLinear, InterpolatesAndHoldsTails) {
  const std::vector<double> x{0.0, 1.0, 3.0}, v{1.0, 3.0, -1.0};
  const auto f = PiecewiseLinearFn::through(x, v);
  EXPECT_DOUBLE_EQ(f(-5.0), 1.0);
  EXPECT_DOUBLE_EQ(f(0.5), 2.0);
  EXPECT_DOUBLE_EQ(f(2.0), 1.0);
  EXPECT_DOUBLE_EQ(f(10.0), -1.0);
  EXPECT_DOUBLE_EQ(f.slope(0.5), 2.0);
  EXPECT_DOUBLE_EQ(f.slope(1.0), -2.0);
  EXPECT_DOUBLE_EQ(f.slope(-1.0), 0.0);
  EXPECT_DOUBLE_EQ(f.sup_abs(), 3.0);
  EXPECT_TRUE(f.is_continuous());
}

TEST(PiecewiseLinear, LeftContinuousAtJumps) {
  PiecewiseLinearFn F({{0.0, 0.0, 1.0}, {1.0, 2.0, 2.0}}, 0.0, 2.0);
  EXPECT_DOUBLE_EQ(F(0.0), 0.0);
  EXPECT_DOUBLE_EQ(F.right_limit(0.0), 1.0);
  EXPECT_DOUBLE_EQ(F(0.5), 1.5);
  EXPECT_DOUBLE_EQ(F.total_jump(), 1.0);
  EXPECT_TRUE(F.is_nondecreasing());
  EXPECT_FALSE(F.is_continuous());
}

TEST(PiecewiseLinear, RejectsMalformedBreakpoints) {
  EXPECT_THROW(PiecewiseLinearFn({{1.0, 0.0, 0.0}, {0.0, 0.0, 0.0}}, 0.0, 0.0), StructuralError);
  EXPECT_THROW(PiecewiseLinearFn({{0.0, 1.0, 1.0}}, 0.0, 1.0), StructuralError);
  EXPECT_THROW(PiecewiseLinearFn({}, 0.0, 1.0), StructuralError);
  try {
    PiecewiseLinearFn({{0.0, 0.0, 0.0}, {2.0, 0.0, 0.0}, {1.0, 0.0, 0.0}}, 0.0, 0.0);
    FAIL();
  } catch (const StructuralError& e) {
    EXPECT_EQ(e.index(), 2);
  }
}

TEST(PiecewiseLinear, SumAndScale) {
  const std::vector<double> x1{0.0, 1.0}, v1{0.0, 1.0}, x2{0.5, 2.0}, v2{1.0, 0.0};
  const auto f = PiecewiseLinearFn::through(x1, v1), g = PiecewiseLinearFn::through(x2, v2);
  const auto s = f + g;
  for (double x : {-1.0, 0.25, 0.5, 0.75, 1.0, 1.5, 3.0}) EXPECT_NEAR(s(x), f(x) + g(x), 1e-15);
  EXPECT_DOUBLE_EQ(f.scaled(3.0)(0.5), 1.5);
}

TEST(PiecewiseLinear, InverseShiftOfJump) {
  // g = unit jump at 0; y(r) = sup{x : x + g(x) < r} is 0 on (0, 1]
  PiecewiseLinearFn g({{0.0, 0.0, 1.0}}, 0.0, 1.0);
  const auto h = identity_plus_inverse_shift(g);
  EXPECT_DOUBLE_EQ(-0.5 - h(-0.5), -0.5);
  EXPECT_DOUBLE_EQ(0.5 - h(0.5), 0.0);
  EXPECT_DOUBLE_EQ(1.0 - h(1.0), 0.0);
  EXPECT_DOUBLE_EQ(3.0 - h(3.0), 2.0);
}
