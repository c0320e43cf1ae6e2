#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "generators.hpp"
#include "hsalpha/builtin.hpp"
#include "hsalpha/harness.hpp"

using namespace hsalpha;
using hsalpha::testing::Gen;

TEST(HarnessProps, ExactEx41CoordinateSystemsAgree) {
  Gen g(61);
  for (int i = 0; i < 1000; ++i) {
    const double t = g.uniform(0.0, 4.0), x = g.uniform(-2.0, 12.0);
    const auto e = exact_ex41_solution(t);
    const auto p = exact_ex41(t, x);
    ASSERT_NEAR(e.u(x), p.u, 1e-12) << t << " " << x;
    ASSERT_NEAR(e.F(x), p.F, 1e-12) << t << " " << x;
  }
}

TEST(HarnessProps, ExactEx41ContinuousInTime) {
  for (double tb : exact_ex41_breaking_times()) {
    double last = INFINITY;
    for (double d : {1e-2, 1e-4, 1e-6}) {
      const auto a = exact_ex41_solution(tb - d), b = exact_ex41_solution(tb + d);
      double sup = 0.0;
      for (int i = 0; i <= 4000; ++i) {
        const double x = -2.0 + 14.0 * i / 4000.0;
        sup = std::max(sup, std::abs(a.u(x) - b.u(x)));
      }
      EXPECT_LT(sup, 10.0 * d) << tb;
      EXPECT_LT(sup, last);
      last = sup;
    }
  }
}

TEST(HarnessProps, SupDistanceSymmetric) {
  Gen g(62);
  for (int trial = 0; trial < 200; ++trial) {
    NodeCurve a, b;
    for (NodeCurve* c : {&a, &b}) {
      c->y = g.knots(1, 12, -3.0, 3.0);
      for (std::size_t i = 0; i < c->y.size(); ++i) c->U.push_back(g.uniform(-2.0, 2.0));
    }
    const double d = sup_distance(a, b);
    EXPECT_EQ(d, sup_distance(b, a));
    double brute = 0.0;
    auto eval = [](const NodeCurve& c, double x) {
      if (x <= c.y.front()) return c.U.front();
      if (x >= c.y.back()) return c.U.back();
      std::size_t i = 1;
      while (c.y[i] < x) ++i;
      const double w = (x - c.y[i - 1]) / (c.y[i] - c.y[i - 1]);
      return c.U[i - 1] + w * (c.U[i] - c.U[i - 1]);
    };
    for (int i = 0; i <= 3000; ++i) {
      const double x = -4.0 + 8.0 * i / 3000.0;
      brute = std::max(brute, std::abs(eval(a, x) - eval(b, x)));
    }
    EXPECT_GE(d + 1e-12, brute);
  }
}
