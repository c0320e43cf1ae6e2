#pragma once

#include <cstddef>
#include <vector>

#include "hsalpha/eulerian.hpp"
#include "hsalpha/piecewise_linear.hpp"

namespace hsalpha {

/// One double cell [x_{2j}, x_{2j+2}] of the projected data.
struct DoubleCell {
  double u0;            ///< u at x_{2j}
  double du;            ///< (u_{2j+2} - u_{2j}) / (2 dx)
  double q;             ///< sqrt(DF_ac - du^2)
  int sign;             ///< +1 or -1; first half slope is du + sign * q
  double f_ac0;         ///< F_ac at x_{2j}
  double f_sing;        ///< singular mass in (-inf, x_{2j+2}); constant on (x_{2j}, x_{2j+2}]

  double slope_first() const { return du + sign * q; }
  double slope_second() const { return du - sign * q; }
};

/// Piecewise linear data (u_dx, F_dx) on the mesh x_j = j dx.
class ProjectedData {
 public:
  ProjectedData() = default;
  ProjectedData(double dx, long j_first, std::vector<DoubleCell> cells, double u_end,
                double f_ac_end, double f_sing_start);

  double dx() const { return dx_; }
  /// Mesh index of the first double cell's left end (even).
  long j_first() const { return j_first_; }
  std::size_t cell_count() const { return cells_.size(); }
  const std::vector<DoubleCell>& cells() const { return cells_; }
  double x(long j) const { return static_cast<double>(j) * dx_; }
  double x_left() const { return x(j_first_); }
  double x_right() const { return x(j_first_ + 2 * static_cast<long>(cells_.size())); }

  double u_end() const { return u_end_; }
  double f_ac_end() const { return f_ac_end_; }
  double f_sing_start() const { return f_sing_start_; }
  double F_total() const;

  double u(double x) const;
  /// F_dx at x, left-continuous; `F_right` is the right limit.
  double F(double x) const;
  double F_right(double x) const;
  double F_ac(double x) const;

  PiecewiseLinearFn u_fn() const;
  PiecewiseLinearFn F_fn() const;
  PiecewiseLinearFn F_ac_fn() const;

 private:
  // Cell index for x in [x_left, x_right); -1 left of mesh, cell_count beyond.
  long cell_of(double x) const;

  double dx_ = 0.0;
  long j_first_ = 0;
  std::vector<DoubleCell> cells_;
  double u_end_ = 0.0;
  double f_ac_end_ = 0.0;
  double f_sing_start_ = 0.0;
};

/// Which sign puts u_dx(x_{2j+1}) nearest to u(x_{2j+1}). Ties give +1.
int sign_select(double u_left, double u_mid, double u_right, double q, double dx);

/// P_dx applied to `data`. The mesh covers the support window padded by one
/// double cell on each side.
ProjectedData project(const InitialData& data, double dx);

struct ProjectionErrorReport {
  double dx;
  double u_sup;
  double u_l2;
  double F_l1;
  double F_l2;
  double u_sup_bound;
  double u_l2_bound;
  double F_l1_bound;
  double F_l2_bound;
  bool within_bounds() const;
};

/// Distance between data and its projection in the norms of the projection
/// estimate, with the bounds themselves. Sup norms are taken over the union of
/// breakpoints refined with `refine` samples per half cell.
ProjectionErrorReport projection_error_report(const InitialData& data, const ProjectedData& proj,
                                              int refine = 16);

}  // namespace hsalpha
