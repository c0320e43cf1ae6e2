#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "hsalpha/eulerian.hpp"
#include "hsalpha/lagrangian.hpp"

namespace hsalpha {

/// Times 0 = tau_0 < tau_1 < ... < tau_K = T at which the iteration restarts.
struct BreakingSchedule {
  std::vector<double> times;
  /// breaking[k] is true when some half cell breaks at times[k].
  std::vector<bool> breaking;

  std::size_t intervals() const { return times.empty() ? 0 : times.size() - 1; }
};

struct ScheduleOptions {
  /// Breaking times closer than this (relative to max(1, tau)) are merged.
  double merge_tol = 1e-12;
  /// Split intervals longer than 1 / (1 + |alpha'| (|u| + T F_inf / 4)).
  bool subdivide = true;
  /// When false the iteration does not restart at each breaking time: only
  /// 0, T and the subdivision points are kept, and cells break inside intervals.
  bool restart_at_breaking = true;
};

/// Every distinct breaking time of `grid` in (0, T], plus 0 and T.
BreakingSchedule extract_breaking_times(const LagrangianGrid& grid, const AlphaFunction& alpha,
                                        double T, const ScheduleOptions& opt = {});

/// Per-cell breaking times snapped onto the merged values used in the schedule.
std::vector<double> snapped_breaking_times(const LagrangianGrid& grid, double T,
                                           double merge_tol = 1e-12);

/// Advances the derivatives of one half cell from `from` to `to`. The cell
/// loses the fraction beta of its V_xi at tau when from < tau <= to.
CellDerivs evolve_half_cell(const CellDerivs& d, double beta, double tau, double from, double to);

struct IntervalReport {
  double t0;
  double t1;
  int iterations;
  double residual;
  std::size_t breaking_cells;
};

struct SolveOptions {
  int max_iterations = 50;
  /// Stopping tolerance; negative means dx^2 / |alpha'| from the grid.
  double epsilon = -1.0;
  ScheduleOptions schedule{};
  /// Upper bound on doubles kept in snapshots taken at schedule times.
  std::size_t snapshot_budget = 4'000'000;
};

struct BrokenCell {
  std::size_t index;
  double beta;
  double tau;
};

/// Solver state sitting at schedule time tau_k.
class EvolutionState {
 public:
  EvolutionState(std::shared_ptr<const LagrangianGrid> initial, BreakingSchedule schedule,
                 const AlphaFunction& alpha, const SolveOptions& opt = {});

  double time() const { return schedule_.times[k_]; }
  std::size_t interval() const { return k_; }
  bool done() const { return k_ + 1 >= schedule_.times.size(); }
  double epsilon() const { return eps_; }

  /// Full grid at time(); O(nodes).
  LagrangianGrid grid() const;
  double V_inf() const;
  double U_left() const;
  double zeta_left() const;
  /// y(t, xi_j) using only cells already finalised; O(log nodes).
  double y_finalised(double t, std::size_t node) const;

  /// Cells breaking in (time(), next time], ascending.
  std::span<const std::size_t> pending() const;

  const BreakingSchedule& schedule() const { return schedule_; }
  const LagrangianGrid& initial() const { return *g0_; }
  std::shared_ptr<const LagrangianGrid> initial_ptr() const { return g0_; }
  const std::vector<double>& betas() const { return beta_; }
  const std::vector<double>& taus() const { return tau_; }
  const std::vector<IntervalReport>& reports() const { return reports_; }
  int max_iterations() const { return max_it_; }

 private:
  friend IntervalReport iterate_interval(EvolutionState&, const AlphaFunction&);
  void finalise(std::size_t cell, double beta);

  std::shared_ptr<const LagrangianGrid> g0_;
  BreakingSchedule schedule_;
  std::size_t k_ = 0;
  double eps_ = 0.0;
  int max_it_ = 50;
  std::vector<double> tau_, beta_, w_;  // w = L * V_bar
  std::vector<std::size_t> order_;        // breaking cells grouped by interval
  std::vector<std::size_t> group_start_;  // order_ slice of interval k
  // Fenwick trees of beta w, beta w tau, beta w tau^2
  std::vector<double> f0_, f1_, f2_;
  double s0_ = 0.0, s1_ = 0.0, s2_ = 0.0;
  std::vector<IntervalReport> reports_;
};

/// Runs the fixed-point iteration on (tau_k, tau_{k+1}], finalises the
/// dissipation fractions and moves the state to tau_{k+1}.
/// Throws NonContractionError after max_iterations.
IntervalReport iterate_interval(EvolutionState& state, const AlphaFunction& alpha);

struct Asymptotes {
  double U_left;
  double zeta_left;
};

/// U and zeta at xi -> -inf at time t in (tau_k, tau_{k+1}], given the
/// dissipation fractions of the cells breaking in that interval.
Asymptotes update_asymptotes(const EvolutionState& state, double t, std::span<const BrokenCell> cells);

/// Closed-form state at t from the initial grid and finalised fractions.
LagrangianGrid state_from_initial(const LagrangianGrid& g0, std::span<const double> beta,
                                  std::span<const double> tau, double t);

/// y and U at the nodes only, same arithmetic as `state_from_initial`.
void node_values_from_initial(const LagrangianGrid& g0, std::span<const double> beta,
                              std::span<const double> tau, double t, std::vector<double>& y,
                              std::vector<double>& U);

struct Snapshot {
  double t;
  LagrangianGrid grid;
};

/// Result of a solve: the initial grid, the per-cell breaking data, the
/// iteration log and stored snapshots. Any other instant is rebuilt on demand.
class Trajectory {
 public:
  Trajectory(std::shared_ptr<const LagrangianGrid> g0, std::vector<double> beta,
             std::vector<double> tau, BreakingSchedule schedule,
             std::vector<IntervalReport> reports, double T);

  LagrangianGrid state_at(double t) const;
  /// Only y and U at the nodes; what the error sweep needs.
  void u_nodes(double t, std::vector<double>& y, std::vector<double>& U) const;
  EulerianSolution eulerian_at(double t) const { return to_eulerian(state_at(t)); }
  /// V_inf(t), total energy.
  double energy_at(double t) const;

  double final_time() const { return T_; }
  const LagrangianGrid& initial() const { return *g0_; }
  const BreakingSchedule& schedule() const { return schedule_; }
  const std::vector<IntervalReport>& reports() const { return reports_; }
  const std::vector<double>& betas() const { return beta_; }
  const std::vector<double>& taus() const { return tau_; }
  int max_iterations_used() const;

  const std::vector<Snapshot>& snapshots() const { return snaps_; }
  /// Stored snapshot at exactly t, or null.
  const LagrangianGrid* snapshot(double t) const;
  void keep_snapshot(double t);

 private:
  std::shared_ptr<const LagrangianGrid> g0_;
  std::vector<double> beta_, tau_;
  BreakingSchedule schedule_;
  std::vector<IntervalReport> reports_;
  double T_;
  std::vector<Snapshot> snaps_;
};

/// Solves from `grid` at t = 0 up to T, keeping snapshots at `output_times`
/// and, within the snapshot budget, at every schedule time.
Trajectory solve(const LagrangianGrid& grid, const AlphaFunction& alpha, double T,
                 std::span<const double> output_times = {}, const SolveOptions& opt = {});

}  // namespace hsalpha
