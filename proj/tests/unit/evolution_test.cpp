#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <vector>

#include "hsalpha/builtin.hpp"
#include "hsalpha/errors.hpp"
#include "hsalpha/evolution.hpp"
#include "hsalpha/harness.hpp"
#include "hsalpha/projection.hpp"

using namespace hsalpha;

namespace {

LagrangianGrid ex41_grid(double dx) { return to_lagrangian_grid(project(builtin::ex41(), dx)); }

std::vector<double> flagged(const BreakingSchedule& s) {
  std::vector<double> out;
  for (std::size_t k = 0; k < s.times.size(); ++k)
    if (s.breaking[k]) out.push_back(s.times[k]);
  return out;
}

}  // namespace

TEST(Schedule, Ex41ConstantAlpha) {
  const auto s = extract_breaking_times(ex41_grid(0.25), AlphaFunction::constant(0.5), 3.0);
  EXPECT_EQ(s.times, (std::vector<double>{0.0, 1.0, 2.0, 3.0}));
  EXPECT_EQ(flagged(s), (std::vector<double>{1.0, 2.0}));
}

TEST(Schedule, Ex41SubdividedKeepsBreakingTimes) {
  const auto s = extract_breaking_times(ex41_grid(0.25), builtin::alpha1(), 3.0);
  EXPECT_EQ(flagged(s), (std::vector<double>{1.0, 2.0}));
  EXPECT_EQ(s.times.front(), 0.0);
  EXPECT_EQ(s.times.back(), 3.0);
  ScheduleOptions plain;
  plain.subdivide = false;
  EXPECT_EQ(extract_breaking_times(ex41_grid(0.25), builtin::alpha1(), 3.0, plain).times,
            (std::vector<double>{0.0, 1.0, 2.0, 3.0}));
}

TEST(Schedule, NoNegativeSlopes) {
  const auto d = InitialData::make(std::make_shared<PiecewiseLinearProfile>(
      PiecewiseLinearFn::through(std::vector<double>{0.0, 1.0}, std::vector<double>{0.0, 1.0})));
  const auto s = extract_breaking_times(to_lagrangian_grid(project(d, 0.25)), AlphaFunction::constant(1.0), 2.5);
  EXPECT_EQ(s.times, (std::vector<double>{0.0, 2.5}));
}

TEST(Schedule, CoarseFlagsIntervalsContainingBreaking) {
  ScheduleOptions o;
  o.restart_at_breaking = false;
  const auto s = extract_breaking_times(ex41_grid(0.25), builtin::alpha1(), 3.0, o);
  EXPECT_EQ(std::count(s.times.begin(), s.times.end(), 1.0), 0);
  EXPECT_EQ(flagged(s).size(), 2u);
}

TEST(EvolveHalfCell, ConservativeQuadratic) {
  const CellDerivs d{0.2, -0.4, 0.8, 0.8};
  for (double t : {0.1, 0.5, 0.9}) {
    const auto r = evolve_half_cell(d, 0.0, 1.0, 0.0, t);
    EXPECT_NEAR(r.y, 0.2 - 0.4 * t + 0.25 * t * t * 0.8, 1e-15);
    EXPECT_NEAR(r.U, -0.4 + 0.5 * 0.8 * t, 1e-15);
    EXPECT_EQ(r.V, 0.8);
    EXPECT_EQ(r.H, 0.8);
  }
}

TEST(EvolveHalfCell, DissipationAtBreaking) {
  const CellDerivs d{0.2, -0.4, 0.8, 0.8};
  const auto r = evolve_half_cell(d, 0.75, 1.0, 0.0, 1.5);
  EXPECT_NEAR(r.V, 0.2, 1e-15);
  EXPECT_EQ(r.H, 0.8);
  // at the breaking instant itself y_xi = U_xi = 0
  const auto b = evolve_half_cell(d, 0.75, 1.0, 0.0, 1.0);
  EXPECT_NEAR(b.y, 0.0, 1e-15);
  EXPECT_NEAR(b.U, 0.0, 1e-15);
}

TEST(EvolveHalfCell, ZeroStaysZero) {
  const auto r = evolve_half_cell({0.0, 0.0, 0.0, 0.0}, 0.5, 0.3, 0.0, 7.0);
  EXPECT_EQ(r.y, 0.0);
  EXPECT_EQ(r.U, 0.0);
  EXPECT_EQ(r.V, 0.0);
}

TEST(Iteration, EpsilonFromLipschitz) {
  auto g = std::make_shared<const LagrangianGrid>(ex41_grid(1.0 / 16.0));
  const auto a = builtin::alpha1();
  EvolutionState s(g, extract_breaking_times(*g, a, 3.0), a);
  EXPECT_NEAR(s.epsilon(), 11.0 / 3.0 / 256.0, 1e-17);
}

TEST(Iteration, ConstantAlphaSinglePass) {
  const auto tr = solve(ex41_grid(1.0 / 16.0), AlphaFunction::constant(0.3), 3.0);
  for (const auto& r : tr.reports()) EXPECT_EQ(r.iterations, 1);
}

TEST(Iteration, BoundedByThree) {
  for (const auto& a : {builtin::alpha1(), builtin::alpha2()}) {
    for (bool coarse : {false, true}) {
      SolveOptions o;
      o.schedule.restart_at_breaking = !coarse;
      const auto tr = solve(ex41_grid(1.0 / 16.0), a, 3.0, {}, o);
      EXPECT_LE(tr.max_iterations_used(), 3) << a.name() << coarse;
    }
  }
}

TEST(Iteration, CapRaisesNonContraction) {
  SolveOptions o;
  o.schedule.restart_at_breaking = false;
  o.max_iterations = 2;
  o.epsilon = 1e-300;
  try {
    solve(ex41_grid(1.0 / 16.0), builtin::alpha1(), 3.0, {}, o);
    FAIL();
  } catch (const NonContractionError& e) {
    EXPECT_GT(e.residual(), 0.0);
  }
}

TEST(Asymptotes, FreeFlightBeforeBreaking) {
  auto g = std::make_shared<const LagrangianGrid>(ex41_grid(0.25));
  const auto a = AlphaFunction::constant(0.5);
  EvolutionState s(g, extract_breaking_times(*g, a, 3.0), a);
  for (double t : {0.25, 0.5, 1.0}) {
    const auto as = update_asymptotes(s, t, {});
    EXPECT_NEAR(as.U_left - g->U_left(), -1.5 * t, 1e-14);
  }
}

TEST(Asymptotes, ZeroEnergyIsStatic) {
  const auto d = InitialData::make(std::make_shared<PiecewiseLinearProfile>(PiecewiseLinearFn::constant(1.0)));
  auto g = std::make_shared<const LagrangianGrid>(to_lagrangian_grid(project(d, 0.5)));
  const auto a = AlphaFunction::constant(0.5);
  EvolutionState s(g, extract_breaking_times(*g, a, 2.0), a);
  const auto as = update_asymptotes(s, 1.7, {});
  EXPECT_EQ(as.U_left, g->U_left());
  EXPECT_NEAR(as.zeta_left, g->zeta_left() + 1.7, 1e-15);
}

TEST(Asymptotes, Ex41SecondRegime) {
  const auto tr = solve(ex41_grid(0.25), builtin::alpha1(), 3.0);
  for (double t : {1.0, 1.25, 1.9}) EXPECT_NEAR(tr.state_at(t).U_left(), -0.75 * t + 2.25, 1e-13) << t;
}

TEST(Solve, Ex41MatchesClosedForm) {
  const auto tr = solve(ex41_grid(1.0 / 16.0), builtin::alpha1(), 3.0);
  for (double t : {0.5, 1.5, 2.5}) {
    const auto e = tr.eulerian_at(t);
    for (int i = -20; i <= 120; ++i) {
      const double x = 0.0625 * i;
      EXPECT_NEAR(e.u(x), exact_ex41(t, x).u, 1e-12) << t << " " << x;
    }
  }
}

TEST(Solve, ConservativeKeepsEnergy) {
  const auto tr = solve(ex41_grid(0.25), AlphaFunction::constant(0.0), 3.0);
  for (double t : {0.0, 0.9, 1.0, 2.0, 3.0}) EXPECT_NEAR(tr.energy_at(t), 6.0, 1e-13);
}

TEST(Solve, FullDissipationDropsToTwo) {
  const auto tr = solve(ex41_grid(0.25), AlphaFunction::constant(1.0), 3.0);
  EXPECT_NEAR(tr.energy_at(0.999), 6.0, 1e-13);
  EXPECT_NEAR(tr.energy_at(1.0), 2.0, 1e-13);
}

TEST(Solve, StateOutsideRangeThrows) {
  const auto tr = solve(ex41_grid(0.25), AlphaFunction::constant(1.0), 3.0);
  EXPECT_THROW(tr.state_at(3.5), ParameterError);
  EXPECT_THROW(solve(ex41_grid(0.25), AlphaFunction::constant(1.0), -1.0), ParameterError);
}
