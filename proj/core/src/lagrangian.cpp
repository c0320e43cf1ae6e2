#include "hsalpha/lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hsalpha/errors.hpp"

namespace hsalpha {

namespace {

PiecewiseLinearFn node_fn(const std::vector<double>& xi, const std::vector<double>& v) {
  // xi may repeat on empty cells; keep the last value for a repeated node
  std::vector<double> xs, vs;
  xs.reserve(xi.size());
  vs.reserve(xi.size());
  for (std::size_t i = 0; i < xi.size(); ++i) {
    if (!xs.empty() && xi[i] <= xs.back()) {
      vs.back() = v[i];
      continue;
    }
    xs.push_back(xi[i]);
    vs.push_back(v[i]);
  }
  return PiecewiseLinearFn::through(xs, vs);
}

CellDerivs ac_cell(double s) {
  const double yx = 1.0 / (1.0 + s * s);
  return {yx, s * yx, s * s * yx, s * s * yx};
}

constexpr CellDerivs kAtomCell{0.0, 0.0, 1.0, 1.0};
constexpr CellDerivs kEmptyCell{0.0, 0.0, 0.0, 0.0};

struct GridBuilder {
  LagrangianGrid g;
  void node(double xi, double y, double U, double H) {
    g.xi.push_back(xi);
    g.y.push_back(y);
    g.U.push_back(U);
    g.V.push_back(H);
    g.H.push_back(H);
  }
};

}  // namespace

PiecewiseLinearFn LagrangianGrid::zeta_fn() const {
  std::vector<double> z(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) z[i] = y[i] - xi[i];
  return node_fn(xi, z);
}
PiecewiseLinearFn LagrangianGrid::U_fn() const { return node_fn(xi, U); }
PiecewiseLinearFn LagrangianGrid::V_fn() const { return node_fn(xi, V); }
PiecewiseLinearFn LagrangianGrid::H_fn() const { return node_fn(xi, H); }

LagrangianGrid to_lagrangian_grid(const ProjectedData& proj) {
  GridBuilder b;
  const std::size_t n = proj.cell_count();
  b.g.dx = proj.dx();
  b.g.xi.reserve(3 * n + 1);
  b.g.d.reserve(3 * n);
  b.g.anchors.reserve(n + 1);
  const double dx = proj.dx();
  double prev_sing = proj.f_sing_start();
  for (std::size_t c = 0; c < n; ++c) {
    const auto& cl = proj.cells()[c];
    const long j = proj.j_first() + 2 * static_cast<long>(c);
    const double x0 = proj.x(j), x1 = proj.x(j + 1);
    const double s1 = cl.slope_first(), s2 = cl.slope_second();
    const double g0 = cl.f_ac0 + prev_sing;
    const double g0r = cl.f_ac0 + cl.f_sing;
    const double g1 = cl.f_ac0 + s1 * s1 * dx + cl.f_sing;
    b.g.anchors.push_back(b.g.xi.size());
    b.node(x0 + g0, x0, cl.u0, g0);
    b.node(x0 + g0r, x0, cl.u0, g0r);
    b.node(x1 + g1, x1, cl.u0 + s1 * dx, g1);
    b.g.d.push_back(g0r > g0 ? kAtomCell : kEmptyCell);
    b.g.d.push_back(ac_cell(s1));
    b.g.d.push_back(ac_cell(s2));
    prev_sing = cl.f_sing;
  }
  const double xe = proj.x_right();
  const double ge = proj.f_ac_end() + prev_sing;
  b.g.anchors.push_back(b.g.xi.size());
  b.node(xe + ge, xe, proj.u_end(), ge);
  return std::move(b.g);
}

LagrangianGrid lagrangian_grid_from_data(const InitialData& data) {
  const auto* u = data.u ? data.u->piecewise_linear() : nullptr;
  if (!u) throw ParameterError("exact grid needs a piecewise linear wave profile");
  if (data.mu.sc_table()) throw ParameterError("exact grid does not support a tabulated sc part");
  std::vector<double> knots = u->knots();
  for (const auto& a : data.mu.atoms()) knots.push_back(a.x);
  knots.push_back(data.x_min);
  knots.push_back(data.x_max);
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

  GridBuilder b;
  for (std::size_t k = 0; k < knots.size(); ++k) {
    const double x = knots[k];
    const auto F = cumulative(data.mu, x);
    if (k > 0) b.g.d.push_back(ac_cell(data.u->slope(knots[k - 1])));
    b.node(x + F.left, x, data.u->value(x), F.left);
    if (F.right > F.left) {
      b.g.d.push_back(kAtomCell);
      b.node(x + F.right, x, data.u->value(x), F.right);
    }
  }
  return std::move(b.g);
}

LagrangianPoint lagrangian_at(const InitialData& data, double xi) {
  if (!std::isfinite(xi)) throw ParameterError("lagrangian_at: xi must be finite");
  double lo = xi - data.F_total() - 1.0, hi = xi + 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-14 * (1.0 + std::abs(xi)); ++it) {
    const double m = 0.5 * (lo + hi);
    if (m + data.F(m) < xi)
      lo = m;
    else
      hi = m;
  }
  const double y = 0.5 * (lo + hi);
  const double H = xi - y;
  return {y, data.u->value(y), H, H};
}

std::vector<double> breaking_times(const LagrangianGrid& grid) {
  double umax = 0.0;
  for (const auto& c : grid.d) umax = std::max(umax, std::abs(c.U));
  const double tol = 1e-12 * (1.0 + umax);
  std::vector<double> tau(grid.d.size());
  for (std::size_t m = 0; m < grid.d.size(); ++m) {
    const auto& c = grid.d[m];
    if (c.y == 0.0 && std::abs(c.U) <= tol)
      tau[m] = grid.t;
    else if (c.U < -tol)
      tau[m] = grid.t - 2.0 * c.y / c.U;
    else
      tau[m] = std::numeric_limits<double>::infinity();
  }
  return tau;
}

EulerianSolution to_eulerian(const LagrangianGrid& grid) {
  if (grid.nodes() == 0) throw CorruptedStateError("empty Lagrangian grid");
  std::vector<Breakpoint> ub, fb, gb;
  ub.reserve(grid.nodes());
  fb.reserve(grid.nodes());
  gb.reserve(grid.nodes());
  std::size_t i = 0;
  const std::size_t n = grid.nodes();
  while (i < n) {
    const double y0 = grid.y[i];
    const double tol = 1e-13 * (1.0 + std::abs(y0));
    std::size_t k = i;
    while (k + 1 < n && grid.y[k + 1] - y0 <= tol) {
      if (grid.y[k + 1] < y0 - 1e-12 * (1.0 + std::abs(y0)))
        throw CorruptedStateError("y decreases between nodes " + std::to_string(k) + " and " +
                                  std::to_string(k + 1));
      ++k;
    }
    if (!ub.empty() && !(y0 > ub.back().x)) {
      // drift below the merge tolerance but out of order
      if (y0 < ub.back().x - 1e-12 * (1.0 + std::abs(y0)))
        throw CorruptedStateError("y decreases at node " + std::to_string(i));
      ub.back().right = grid.U[k];
      fb.back().right = grid.V[k];
      gb.back().right = grid.H[k];
    } else {
      ub.push_back({y0, grid.U[i], grid.U[i]});
      fb.push_back({y0, grid.V[i], grid.V[k]});
      gb.push_back({y0, grid.H[i], grid.H[k]});
    }
    i = k + 1;
  }
  EulerianSolution s;
  s.t = grid.t;
  for (auto& b : ub) b.right = b.left;  // u is continuous
  const double ul = ub.front().left, ur = ub.back().left;
  s.u = PiecewiseLinearFn(std::move(ub), ul, ur);
  const double fl = fb.front().left, fr = fb.back().right;
  s.F = PiecewiseLinearFn(std::move(fb), fl, fr);
  const double gl = gb.front().left, gr = gb.back().right;
  s.G = PiecewiseLinearFn(std::move(gb), gl, gr);
  return s;
}

bool InvariantReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

InvariantReport check_lagrangian_invariants(const LagrangianGrid& g, bool initial, double tol) {
  InvariantReport r;
  const std::size_t n = g.nodes();
  if (n == 0 || g.d.size() + 1 != n || g.y.size() != n || g.U.size() != n || g.V.size() != n ||
      g.H.size() != n)
    throw CorruptedStateError("grid arrays have inconsistent sizes");

  double mono_xi = 0.0, mono_y = 0.0, sign = 0.0, prod = 0.0, vh = 0.0, node = 0.0;
  double scale = 1.0;
  std::size_t prod_at = 0;
  for (std::size_t i = 0; i < n; ++i)
    scale = std::max({scale, std::abs(g.U[i]), std::abs(g.V[i]), std::abs(g.H[i])});
  for (std::size_t m = 0; m + 1 < n; ++m) {
    const double L = g.xi[m + 1] - g.xi[m];
    mono_xi = std::max(mono_xi, -L);
    mono_y = std::max(mono_y, g.y[m] - g.y[m + 1]);
    const auto& c = g.d[m];
    sign = std::max({sign, -c.y, -c.V, -c.H});
    vh = std::max(vh, c.V - c.H);
    const double k = 1.0 + c.y * c.V + c.U * c.U;
    const double pv = std::abs(c.y * c.V - c.U * c.U) / k;
    if (pv > prod) {
      prod = pv;
      prod_at = m;
    }
    node = std::max({node, std::abs(g.y[m + 1] - g.y[m] - c.y * L),
                     std::abs(g.U[m + 1] - g.U[m] - c.U * L), std::abs(g.V[m + 1] - g.V[m] - c.V * L),
                     std::abs(g.H[m + 1] - g.H[m] - c.H * L)});
  }
  node /= scale;
  r.checks.push_back({"xi nondecreasing", mono_xi <= 0.0, std::max(mono_xi, 0.0), ""});
  r.checks.push_back({"y nondecreasing", mono_y <= tol * scale, std::max(mono_y, 0.0), ""});
  r.checks.push_back({"y_xi, V_xi, H_xi >= 0", sign <= tol, std::max(sign, 0.0), ""});
  r.checks.push_back({"V_xi <= H_xi", vh <= tol * scale, std::max(vh, 0.0), ""});
  r.checks.push_back({"y_xi V_xi = U_xi^2", prod <= tol, prod,
                      prod > 0.0 ? "worst at cell " + std::to_string(prod_at) : ""});
  // node differences are sums of roundoff over one cell only
  r.checks.push_back({"nodes match derivatives", node <= 1e3 * tol, node, ""});
  r.checks.push_back({"V_0 = 0", std::abs(g.V.front()) <= tol, std::abs(g.V.front()), ""});
  if (initial) {
    double sum = 0.0, vheq = 0.0, dsum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sum = std::max(sum, std::abs(g.y[i] + g.H[i] - g.xi[i]) / (1.0 + std::abs(g.xi[i])));
      vheq = std::max(vheq, std::abs(g.V[i] - g.H[i]));
    }
    for (const auto& c : g.d)
      if (c.y + c.H != 0.0) dsum = std::max(dsum, std::abs(c.y + c.H - 1.0));
    r.checks.push_back({"y + H = xi", sum <= tol, sum, ""});
    r.checks.push_back({"y_xi + H_xi = 1", dsum <= tol, dsum, ""});
    r.checks.push_back({"V = H", vheq <= tol * scale, vheq, ""});
  }
  return r;
}

}  // namespace hsalpha
