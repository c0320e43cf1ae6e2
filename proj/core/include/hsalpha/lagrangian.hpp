#pragma once

#include <cstddef>
#include <vector>

#include "hsalpha/eulerian.hpp"
#include "hsalpha/piecewise_linear.hpp"
#include "hsalpha/projection.hpp"

namespace hsalpha {

/// Derivatives (y_xi, U_xi, V_xi, H_xi) on one half cell. Constant in xi.
struct CellDerivs {
  double y;
  double U;
  double V;
  double H;
};

/// Piecewise linear Lagrangian state X = (y, U, V, H) on nodes xi_0 <= ... <= xi_M.
///
/// Left of xi_0 the state is y = xi + (y_0 - xi_0), U = U_0, V = H = 0.
/// Right of xi_M, y - xi, U, V and H are frozen at their node-M values.
struct LagrangianGrid {
  double t = 0.0;
  /// Mesh width of the projection this came from; 0 for grids built from exact data.
  double dx = 0.0;
  std::vector<double> xi, y, U, V, H;
  std::vector<CellDerivs> d;
  /// Node index of xi_{3j} for each double cell plus the closing node. Empty
  /// when the grid is not built from a projection.
  std::vector<std::size_t> anchors;

  std::size_t nodes() const { return xi.size(); }
  std::size_t cells() const { return d.size(); }
  double length(std::size_t m) const { return xi[m + 1] - xi[m]; }
  double V_inf() const { return V.empty() ? 0.0 : V.back(); }
  double U_left() const { return U.empty() ? 0.0 : U.front(); }
  double zeta_left() const { return y.empty() ? 0.0 : y.front() - xi.front(); }

  /// Piecewise linear interpolants in xi. `zeta_fn` is y - xi, which unlike y
  /// has constant tails.
  PiecewiseLinearFn zeta_fn() const;
  PiecewiseLinearFn U_fn() const;
  PiecewiseLinearFn V_fn() const;
  PiecewiseLinearFn H_fn() const;
};

/// L applied to projected data, three half cells per double cell.
LagrangianGrid to_lagrangian_grid(const ProjectedData& proj);

/// L applied to piecewise linear data with atoms, one node per knot plus one
/// more at each atom. Exact, no projection involved.
LagrangianGrid lagrangian_grid_from_data(const InitialData& data);

struct LagrangianPoint {
  double y;
  double U;
  double V;
  double H;
};

/// Pointwise L: y(xi) = sup{x : x + F(x) < xi} by bisection.
LagrangianPoint lagrangian_at(const InitialData& data, double xi);

/// Breaking time of each half cell, absolute: t + (-2 y_xi / U_xi) when
/// U_xi < 0, t when y_xi = U_xi = 0, +inf otherwise.
std::vector<double> breaking_times(const LagrangianGrid& grid);

/// Eulerian solution at one instant; F and G are left-continuous.
struct EulerianSolution {
  double t = 0.0;
  PiecewiseLinearFn u;
  PiecewiseLinearFn F;
  PiecewiseLinearFn G;
};

/// M: nodes at y, u = U, F(y-) = V at the first node with that y. Nodes whose
/// y agree to 1e-13 (1 + |y|) merge and F jumps there.
EulerianSolution to_eulerian(const LagrangianGrid& grid);

struct InvariantReport {
  std::vector<ValidationCheck> checks;
  bool ok() const;
};

/// Sign, monotonicity and product relations; with `initial` also y + H = xi
/// and V = H.
InvariantReport check_lagrangian_invariants(const LagrangianGrid& grid, bool initial,
                                            double tol = 1e-12);

}  // namespace hsalpha
