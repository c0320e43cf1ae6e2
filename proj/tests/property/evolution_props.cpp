#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "generators.hpp"
#include "hsalpha/builtin.hpp"
#include "hsalpha/evolution.hpp"
#include "hsalpha/projection.hpp"

using namespace hsalpha;
using hsalpha::testing::Gen;

namespace {

struct Case {
  LagrangianGrid grid;
  AlphaFunction alpha;
  double T;
};

Case random_case(Gen& g) {
  const auto d = g.data();
  return {to_lagrangian_grid(project(d, g.dx())), g.coin() ? g.alpha() : AlphaFunction::constant(g.uniform(0.0, 1.0)),
          g.uniform(0.5, 4.0)};
}

}  // namespace

TEST(EvolutionProps, EnergyMonotoneAndDropsMatchCells) {
  Gen g(41);
  for (int trial = 0; trial < 40; ++trial) {
    const auto c = random_case(g);
    const auto tr = solve(c.grid, c.alpha, c.T);
    const auto& s = tr.schedule();
    double prev = tr.energy_at(0.0);
    for (std::size_t k = 1; k < s.times.size(); ++k) {
      const double a = s.times[k - 1], b = s.times[k];
      for (double t : {a + 0.5 * (b - a), b}) {
        const double e = tr.energy_at(t);
        ASSERT_LE(e, prev + 1e-12);
        prev = e;
      }
      // drop at b against the cells breaking there
      double want = 0.0;
      for (std::size_t m = 0; m < c.grid.cells(); ++m)
        if (tr.taus()[m] == b) want += tr.betas()[m] * c.grid.d[m].V * c.grid.length(m);
      const double before = tr.energy_at(a + 0.5 * (b - a));
      EXPECT_NEAR(before - tr.energy_at(b), want, 1e-12 * (1.0 + c.grid.V_inf())) << trial << " t=" << b;
    }
  }
}

TEST(EvolutionProps, HFrozenAndInvariantsHold) {
  Gen g(42);
  for (int trial = 0; trial < 30; ++trial) {
    const auto c = random_case(g);
    const auto tr = solve(c.grid, c.alpha, c.T);
    for (double t : {0.3 * c.T, 0.71 * c.T, c.T}) {
      const auto st = tr.state_at(t);
      for (std::size_t i = 0; i < st.nodes(); ++i) ASSERT_EQ(st.H[i], c.grid.H[i]);
      const auto r = check_lagrangian_invariants(st, false, 1e-10);
      for (const auto& ch : r.checks) EXPECT_TRUE(ch.passed) << ch.name << " " << ch.worst << " t=" << t;
    }
  }
}

TEST(EvolutionProps, SnapshotsMatchChaining) {
  Gen g(43);
  for (int trial = 0; trial < 20; ++trial) {
    const auto c = random_case(g);
    const auto tr = solve(c.grid, c.alpha, c.T);
    for (const auto& snap : tr.snapshots()) {
      const auto re = state_from_initial(tr.initial(), tr.betas(), tr.taus(), snap.t);
      ASSERT_EQ(re.y, snap.grid.y);
      ASSERT_EQ(re.U, snap.grid.U);
      ASSERT_EQ(re.V, snap.grid.V);
    }
  }
}

TEST(EvolutionProps, SplitScheduleSemigroupForConstantAlpha) {
  Gen g(44);
  for (int trial = 0; trial < 30; ++trial) {
    const auto d = g.data();
    auto grid = std::make_shared<const LagrangianGrid>(to_lagrangian_grid(project(d, g.dx())));
    const auto a = AlphaFunction::constant(g.uniform(0.0, 1.0));
    const double T = g.uniform(0.5, 3.0);
    const auto s1 = extract_breaking_times(*grid, a, T);
    BreakingSchedule s2;
    for (std::size_t k = 0; k < s1.times.size(); ++k) {
      if (k > 0) {
        const double mid = 0.5 * (s1.times[k - 1] + s1.times[k]);
        s2.times.push_back(mid);
        s2.breaking.push_back(false);
      }
      s2.times.push_back(s1.times[k]);
      s2.breaking.push_back(s1.breaking[k]);
    }
    EvolutionState one(grid, s1, a), two(grid, s2, a);
    while (!one.done()) iterate_interval(one, a);
    while (!two.done()) iterate_interval(two, a);
    const auto x = one.grid(), y = two.grid();
    for (std::size_t i = 0; i < x.nodes(); ++i) {
      ASSERT_NEAR(x.y[i], y.y[i], 1e-12 * (1.0 + std::abs(x.y[i])));
      ASSERT_NEAR(x.U[i], y.U[i], 1e-12 * (1.0 + std::abs(x.U[i])));
      ASSERT_NEAR(x.V[i], y.V[i], 1e-12 * (1.0 + x.V_inf()));
    }
  }
}

TEST(EvolutionProps, IterationCountBounded) {
  Gen g(45);
  for (int trial = 0; trial < 30; ++trial) {
    const auto c = random_case(g);
    EXPECT_LE(solve(c.grid, c.alpha, c.T).max_iterations_used(), 3);
  }
}
