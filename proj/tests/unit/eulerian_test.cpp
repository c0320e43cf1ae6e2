#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "hsalpha/builtin.hpp"
#include "hsalpha/errors.hpp"
#include "hsalpha/eulerian.hpp"

using namespace hsalpha;

namespace {

const ValidationCheck* find(const ValidationReport& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return &c;
  return nullptr;
}

double cusp_ux(double x) {
  if (x <= -1.0 || x >= 1.0 || x == 0.0) return 0.0;
  return 2.0 / 3.0 * std::copysign(std::pow(std::abs(x), -1.0 / 3.0), x);
}

}  // namespace

TEST(Validate, Ex41Passes) {
  const auto d = builtin::ex41();
  const auto a = builtin::alpha1();
  const auto r = validate_initial_data(d, &a);
  EXPECT_TRUE(r.ok());
  EXPECT_DOUBLE_EQ(r.total_energy, 6.0);
}

TEST(Validate, ZeroDataPasses) {
  const auto d = InitialData::make(std::make_shared<PiecewiseLinearProfile>(PiecewiseLinearFn::constant(0.0)));
  const auto r = validate_initial_data(d);
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.total_energy, 0.0);
}

TEST(Validate, MismatchedAcDensityFails) {
  auto u = std::make_shared<PiecewiseLinearProfile>(
      PiecewiseLinearFn::through(std::vector<double>{0.0, 1.0, 2.0}, std::vector<double>{0.0, 1.0, 0.0}));
  InitialData d = InitialData::make(u);
  // density 1 on (0,1) as it should be, 3 on (1,2) instead of 1
  d.mu = EnergyMeasure(AcCumulative::tabulated(PiecewiseLinearFn::through(
                           std::vector<double>{0.0, 1.0, 2.0}, std::vector<double>{0.0, 1.0, 4.0})),
                       {});
  const auto r = validate_initial_data(d);
  EXPECT_FALSE(r.ok());
  const auto* c = find(r, "ac density equals u_x^2");
  ASSERT_NE(c, nullptr);
  EXPECT_FALSE(c->passed);
  EXPECT_NE(c->detail.find("1.0"), std::string::npos);
}

TEST(Validate, AlphaOutOfRangeOrTooSteep) {
  const auto d = builtin::ex41();
  const AlphaFunction big([](double) { return 1.5; }, 0.0);
  EXPECT_FALSE(find(validate_initial_data(d, &big), "alpha in [0, 1]")->passed);
  const AlphaFunction steep([](double x) { return x > 1.0 ? 1.0 : 0.0; }, 0.1);
  EXPECT_FALSE(find(validate_initial_data(d, &steep), "alpha Lipschitz")->passed);
  EXPECT_THROW(AlphaFunction::constant(-0.1), ParameterError);
}

TEST(Cumulative, Ex41AtomAndTotals) {
  const auto d = builtin::ex41();
  auto c = cumulative(d.mu, 0.0);
  EXPECT_DOUBLE_EQ(c.left, 0.0);
  EXPECT_DOUBLE_EQ(c.right, 1.0);
  c = cumulative(d.mu, 3.0);
  EXPECT_NEAR(c.left, 6.0, 1e-14);
  EXPECT_NEAR(c.right, 6.0, 1e-14);
  // 1 + 1 + 4 * 0.5 = 4
  EXPECT_NEAR(d.F(1.5), 4.0, 1e-14);
}

TEST(Cumulative, EmptyMeasure) {
  const EnergyMeasure mu;
  for (double x : {-3.0, 0.0, 7.5}) {
    const auto c = cumulative(mu, x);
    EXPECT_EQ(c.left, 0.0);
    EXPECT_EQ(c.right, 0.0);
  }
}

TEST(Cusp, ProfileAndEnergy) {
  const CuspProfile u;
  EXPECT_DOUBLE_EQ(u.value(0.0), 0.0);
  EXPECT_NEAR(u.value(0.5), std::pow(0.5, 2.0 / 3.0), 1e-15);
  EXPECT_DOUBLE_EQ(u.value(-4.0), 1.0);
  EXPECT_NEAR(u.ac_energy(0.0), 4.0 / 3.0, 1e-15);
  EXPECT_NEAR(u.ac_energy(1.0), 8.0 / 3.0, 1e-15);
  // increments agree with plain differences where they do not cancel
  const auto [du, dF] = u.increments(0.25, 0.75);
  EXPECT_NEAR(du, u.value(0.75) - u.value(0.25), 1e-15);
  EXPECT_NEAR(dF, u.ac_energy(0.75) - u.ac_energy(0.25), 1e-14);
}

TEST(Besov, ConstantIsZero) {
  const auto s = sample_midpoints([](double) { return 2.0; }, -1.0, 1.0, 4096);
  // zero padding outside makes the edges count; use a function vanishing there
  const auto z = sample_midpoints([](double) { return 0.0; }, -1.0, 1.0, 4096);
  const auto h = geometric_h_grid(16);
  EXPECT_EQ(besov_seminorm_estimate(z, 0.5, h), 0.0);
  EXPECT_GT(besov_seminorm_estimate(s, 0.5, h), 0.0);
}

TEST(Besov, RejectsBadBeta) {
  const auto s = sample_midpoints([](double x) { return x; }, -1.0, 1.0, 1024);
  const auto h = geometric_h_grid(8);
  EXPECT_THROW(besov_seminorm_estimate(s, 0.0, h), ParameterError);
  EXPECT_THROW(besov_seminorm_estimate(s, 1.5, h), ParameterError);
}

TEST(Besov, CuspStableAtOneSixthGrowsAtOneHalf) {
  const auto s = sample_midpoints(cusp_ux, -3.0, 3.0, 1 << 20);
  const auto h32 = geometric_h_grid(32), h40 = geometric_h_grid(40);
  const double a = besov_seminorm_estimate(s, 1.0 / 6.0, h32);
  const double b = besov_seminorm_estimate(s, 1.0 / 6.0, h40);
  EXPECT_TRUE(std::isfinite(a));
  EXPECT_LT(std::abs(b - a) / a, 0.05);
  const double c = besov_seminorm_estimate(s, 0.5, geometric_h_grid(16));
  const double e = besov_seminorm_estimate(s, 0.5, h40);
  EXPECT_GT(e, 2.0 * c);
}
