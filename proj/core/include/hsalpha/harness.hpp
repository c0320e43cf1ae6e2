#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hsalpha/eulerian.hpp"
#include "hsalpha/evolution.hpp"
#include "hsalpha/lagrangian.hpp"

namespace hsalpha {

// ---------------------------------------------------------------- ex41
// Closed-form solution of the multipeakon example, for any alpha with
// alpha(11/4) = 3/4 and alpha(35/8) = 9/10 (breaking at t = 1 and t = 2).

struct EulerianPoint {
  double u;
  double F;
};

/// u(t, x) and F(t, x) from the Eulerian closed form.
EulerianPoint exact_ex41(double t, double x);
/// (y, U, V, H)(t, xi) from the Lagrangian closed form.
LagrangianPoint exact_lagrangian_ex41(double t, double xi);
/// Lagrangian nodes at xi = 0, 1, 3, 8 pushed through M; exact since
/// everything is linear between them.
LagrangianGrid exact_ex41_grid(double t);
EulerianSolution exact_ex41_solution(double t);
/// Breaking instants of the exact solution in (0, inf).
std::vector<double> exact_ex41_breaking_times();

// ---------------------------------------------------------------- sources

/// u at one instant as nodes (y_j, U_j), y nondecreasing, constant tails.
struct NodeCurve {
  std::vector<double> y;
  std::vector<double> U;
};

class SolutionSource {
 public:
  virtual ~SolutionSource() = default;
  virtual void u_curve(double t, NodeCurve& out) const = 0;
  /// Instants where the error must be sampled in addition to the uniform grid.
  virtual std::vector<double> event_times() const { return {}; }
};

class TrajectorySource final : public SolutionSource {
 public:
  /// `events`: report the schedule times of the trajectory as sample instants.
  TrajectorySource(std::shared_ptr<const Trajectory> traj, bool events);
  void u_curve(double t, NodeCurve& out) const override;
  std::vector<double> event_times() const override;
  const Trajectory& trajectory() const { return *traj_; }

 private:
  std::shared_ptr<const Trajectory> traj_;
  bool events_;
};

class Ex41Source final : public SolutionSource {
 public:
  void u_curve(double t, NodeCurve& out) const override;
  std::vector<double> event_times() const override { return exact_ex41_breaking_times(); }
};

/// sup_x |a(x) - b(x)| over the union of breakpoints; O(|a| + |b|).
double sup_distance(const NodeCurve& a, const NodeCurve& b);

/// Uniform time samples when nothing else is asked for.
inline constexpr int kDefaultTimeSamples = 4;

/// max over sample instants of |u_ref - u_num|_inf / |u_ref|_inf. Instants
/// are `n_t` uniform points on [0, T] (both ends included) plus both sources'
/// event times in [0, T].
double relative_error(const SolutionSource& ref, const SolutionSource& num, double T,
                      int n_t = kDefaultTimeSamples);

// ---------------------------------------------------------------- EOC

struct ConvergenceRow {
  int k = 0;
  double dx = 0.0;
  double err = 0.0;
  double eoc = 0.0;  ///< NaN on the first row
  double wall_ms = 0.0;
  int iterations = 0;  ///< worst M_it over the row's intervals
  bool ok = true;
  int code = 0;  ///< 2 invalid input, 3 no contraction
  std::string failure;
};

struct ConvergenceReport {
  std::string example;
  std::string alpha;
  double T = 0.0;
  std::string reference;
  std::vector<ConvergenceRow> rows;
  /// Least squares slope of ln err against ln dx over successful rows.
  double ls_slope = 0.0;
  double ls_intercept = 0.0;
  bool bounds_ok = true;
  std::vector<std::string> violations;
};

/// Fills eoc = ln(E_{k-1} / E_k) / ln(dx_{k-1} / dx_k) and the LS fit.
void compute_eoc(ConvergenceReport& report);

struct ExperimentConfig {
  std::string example = "ex42";   ///< ex41, ex42, cusp, or anything `data` names
  std::string alpha_name;          ///< shown in the report
  std::optional<AlphaFunction> alpha;
  std::optional<InitialData> data;  ///< overrides the builtin
  int kmin = 1;
  int kmax = 5;
  double T = 1.5;
  bool fast = false;
  /// Fine reference mesh; default 1e-5 (4^-8 with `fast`) for data without
  /// a closed form or exact grid.
  std::optional<double> dx_ref;
  /// Uniform instants in the time sup, on top of every event time.
  int time_samples = kDefaultTimeSamples;
  /// When false wall_ms is written as 0, which makes reports byte-identical.
  bool record_timing = true;
  unsigned jobs = 0;  ///< 0: hardware concurrency
  /// Check per-row M_it <= 3, energy monotone, and the slope floor if set.
  bool enforce_bounds = false;
  std::optional<double> slope_floor;
  SolveOptions solve{};
  /// Per-k solution at T goes here as solution_k<k>.csv; empty: no dumps.
  std::filesystem::path out_dir;
};

/// Mesh k is dx = 4^-k.
double mesh_width(int k);

ConvergenceReport run_convergence(const ExperimentConfig& cfg);

/// report.csv, report.json, loglog.dat in `dir`.
void write_report(const ConvergenceReport& report, const std::filesystem::path& dir);
std::string report_csv(const ConvergenceReport& report);

}  // namespace hsalpha
