#pragma once

#include <cstddef>
#include <vector>

#include "hsalpha/eulerian.hpp"
#include "hsalpha/lagrangian.hpp"
#include "hsalpha/piecewise_linear.hpp"
#include "hsalpha/projection.hpp"

namespace hsalpha {

/// F of piecewise linear data as one left-continuous function with jumps.
/// Throws ParameterError for other profiles.
PiecewiseLinearFn cumulative_fn(const InitialData& data);

/// Y(r) = sup{x : x + (G + G_dx)(x) / 2 < r}, by bisection to 1e-14.
double combined_Y(const PiecewiseLinearFn& G, const PiecewiseLinearFn& G_dx, double r);

struct RescalingPair {
  double phi;
  double psi;
};

struct CellLengths {
  std::size_t cell;
  double x_left;
  double meas_B;            ///< {psi' = 0} in [xi_3j, xi_3j+3)
  double meas_B_dx;         ///< {phi' = 0} in [xi_3j, xi_3j+3), measured
  double meas_B_dx_exact;   ///< (xi_3j+1 - xi_3j) / 2
  double nu_sing;           ///< singular mass of [x_2j, x_2j+2)
};

/// Everything needed to compare the exact and projected Lagrangian pictures
/// of one datum through the common rescaling r -> (phi(r), psi(r)).
class RescalingAnalysis {
 public:
  RescalingAnalysis(const InitialData& data, const ProjectedData& proj);

  /// y(xi) for the exact data and for the projection.
  double y_bar(double xi) const { return xi - h_(xi); }
  double y_bar_dx(double xi) const { return xi - h_dx_(xi); }
  double Y(double r) const { return r - h_mix_(r); }

  /// phi is the smallest intersection of y_bar(xi) with y_bar_dx(2r - xi).
  RescalingPair pair(double r) const;
  /// Breakpoints in r of phi and psi.
  std::vector<double> r_breakpoints() const;

  /// Per double cell lengths. Piecewise linear data is classified from the
  /// slopes on each linear piece; a tabulated singular continuous part falls
  /// back to symmetric difference quotients (step `step`) against `threshold`.
  std::vector<CellLengths> coinciding_lengths(double step = 1e-7, double threshold = 0.5) const;

  const PiecewiseLinearFn& G() const { return G_; }
  const PiecewiseLinearFn& G_dx() const { return G_dx_; }
  const LagrangianGrid& grid_dx() const { return grid_dx_; }

 private:
  PiecewiseLinearFn G_, G_dx_;
  PiecewiseLinearFn h_, h_dx_, h_mix_;
  LagrangianGrid grid_dx_;
  std::vector<double> cell_x_;
  std::vector<double> nu_sing_;
  double half_range_;
  bool has_sc_ = false;
};

/// Worst |meas B_j - meas B_dx,j| and worst distance of either from nu_sing / 2.
struct CoincidenceSummary {
  double worst_pair;
  double worst_half_mass;
};
CoincidenceSummary summarize(const std::vector<CellLengths>& cells);

}  // namespace hsalpha
