#include "hsalpha/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hsalpha/errors.hpp"

namespace hsalpha {

namespace {

void fenwick_add(std::vector<double>& f, std::size_t i, double v) {
  for (std::size_t k = i + 1; k <= f.size(); k += k & (~k + 1)) f[k - 1] += v;
}

// Sum over entries [0, j).
double fenwick_prefix(const std::vector<double>& f, std::size_t j) {
  double s = 0.0;
  for (std::size_t k = j; k > 0; k -= k & (~k + 1)) s += f[k - 1];
  return s;
}

void check_time(double T) {
  if (!(T > 0.0) || !std::isfinite(T)) throw ParameterError("final time must be positive and finite");
}

double node_sup_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

std::vector<double> snapped_breaking_times(const LagrangianGrid& grid, double T, double merge_tol) {
  check_time(T);
  if (grid.t != 0.0) throw ParameterError("breaking times are extracted from the grid at t = 0");
  std::vector<double> tau = breaking_times(grid);
  std::vector<std::size_t> idx;
  for (std::size_t m = 0; m < tau.size(); ++m)
    if (tau[m] > 0.0 && tau[m] <= T) idx.push_back(m);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return tau[a] < tau[b] || (tau[a] == tau[b] && a < b);
  });
  std::size_t i = 0;
  while (i < idx.size()) {
    const double start = tau[idx[i]];
    std::size_t k = i;
    while (k + 1 < idx.size() && tau[idx[k + 1]] - start <= merge_tol * std::max(1.0, start)) ++k;
    double rep = tau[idx[k]];
    if (T - rep <= merge_tol * std::max(1.0, T)) rep = T;
    for (std::size_t q = i; q <= k; ++q) tau[idx[q]] = rep;
    i = k + 1;
  }
  return tau;
}

BreakingSchedule extract_breaking_times(const LagrangianGrid& grid, const AlphaFunction& alpha,
                                        double T, const ScheduleOptions& opt) {
  const auto tau = snapped_breaking_times(grid, T, opt.merge_tol);
  std::vector<double> reps;
  for (double t : tau)
    if (t > 0.0 && t <= T) reps.push_back(t);
  std::vector<double> all = reps;
  if (!opt.restart_at_breaking) reps.clear();
  std::sort(reps.begin(), reps.end());
  reps.erase(std::unique(reps.begin(), reps.end()), reps.end());

  BreakingSchedule s;
  s.times.push_back(0.0);
  s.breaking.push_back(false);
  for (double t : reps) {
    s.times.push_back(t);
    s.breaking.push_back(true);
  }
  if (s.times.back() != T) {
    s.times.push_back(T);
    s.breaking.push_back(false);
  }

  if (opt.subdivide && alpha.lipschitz() > 0.0) {
    const double umax = node_sup_abs(grid.U);
    const double cap = 1.0 / (1.0 + alpha.lipschitz() * (umax + 0.25 * T * grid.V_inf()));
    BreakingSchedule fine;
    fine.times.push_back(s.times.front());
    fine.breaking.push_back(s.breaking.front());
    for (std::size_t k = 0; k + 1 < s.times.size(); ++k) {
      const double a = s.times[k], b = s.times[k + 1];
      const auto pieces = static_cast<std::size_t>(std::ceil((b - a) / cap));
      for (std::size_t p = 1; p < pieces; ++p) {
        fine.times.push_back(a + (b - a) * static_cast<double>(p) / static_cast<double>(pieces));
        fine.breaking.push_back(false);
      }
      fine.times.push_back(b);
      fine.breaking.push_back(s.breaking[k + 1]);
    }
    s = std::move(fine);
  }
  if (!opt.restart_at_breaking) {
    // flag intervals (times[k-1], times[k]] that contain a breaking time
    for (double t : all) {
      const auto it = std::lower_bound(s.times.begin(), s.times.end(), t);
      s.breaking[static_cast<std::size_t>(it - s.times.begin())] = true;
    }
  }
  return s;
}

CellDerivs evolve_half_cell(const CellDerivs& d, double beta, double tau, double from, double to) {
  const double dt = to - from;
  CellDerivs r{d.y + d.U * dt + 0.25 * d.V * dt * dt, d.U + 0.5 * d.V * dt, d.V, d.H};
  if (from < tau && tau <= to && beta != 0.0) {
    const double s = to - tau;
    r.y -= 0.25 * beta * d.V * s * s;
    r.U -= 0.5 * beta * d.V * s;
    r.V = d.V * (1.0 - beta);
  }
  return r;
}

LagrangianGrid state_from_initial(const LagrangianGrid& g0, std::span<const double> beta,
                                  std::span<const double> tau, double t) {
  const std::size_t M = g0.cells();
  if (beta.size() != M || tau.size() != M) throw CorruptedStateError("per-cell arrays do not match grid");
  double D = 0.0, E = 0.0;
  for (std::size_t m = 0; m < M; ++m) {
    if (beta[m] == 0.0 || !(tau[m] > 0.0 && tau[m] <= t)) continue;
    const double w = beta[m] * g0.length(m) * g0.d[m].V;
    const double s = t - tau[m];
    D += w * s * s;
    E += w * s;
  }
  const double Vinf = g0.V_inf();
  LagrangianGrid g;
  g.t = t;
  g.dx = g0.dx;
  g.xi = g0.xi;
  g.H = g0.H;
  g.anchors = g0.anchors;
  g.y.resize(M + 1);
  g.U.resize(M + 1);
  g.V.resize(M + 1);
  g.d.resize(M);
  double pD = 0.0, pE = 0.0, pV = 0.0;
  for (std::size_t j = 0; j <= M; ++j) {
    const double a = g0.V[j] - 0.5 * Vinf;
    g.y[j] = g0.y[j] + g0.U[j] * t + 0.25 * a * t * t + 0.125 * D - 0.25 * pD;
    g.U[j] = g0.U[j] + 0.5 * a * t + 0.25 * E - 0.5 * pE;
    g.V[j] = g0.V[j] - pV;
    if (j == M) break;
    g.d[j] = evolve_half_cell(g0.d[j], beta[j], tau[j], 0.0, t);
    if (beta[j] != 0.0 && tau[j] > 0.0 && tau[j] <= t) {
      const double w = beta[j] * g0.length(j) * g0.d[j].V;
      const double s = t - tau[j];
      pD += w * s * s;
      pE += w * s;
      pV += w;
    }
  }
  return g;
}

void node_values_from_initial(const LagrangianGrid& g0, std::span<const double> beta,
                              std::span<const double> tau, double t, std::vector<double>& y,
                              std::vector<double>& U) {
  const std::size_t M = g0.cells();
  if (beta.size() != M || tau.size() != M) throw CorruptedStateError("per-cell arrays do not match grid");
  double D = 0.0, E = 0.0;
  for (std::size_t m = 0; m < M; ++m) {
    if (beta[m] == 0.0 || !(tau[m] > 0.0 && tau[m] <= t)) continue;
    const double w = beta[m] * g0.length(m) * g0.d[m].V;
    const double s = t - tau[m];
    D += w * s * s;
    E += w * s;
  }
  const double Vinf = g0.V_inf();
  y.resize(M + 1);
  U.resize(M + 1);
  double pD = 0.0, pE = 0.0;
  for (std::size_t j = 0; j <= M; ++j) {
    const double a = g0.V[j] - 0.5 * Vinf;
    y[j] = g0.y[j] + g0.U[j] * t + 0.25 * a * t * t + 0.125 * D - 0.25 * pD;
    U[j] = g0.U[j] + 0.5 * a * t + 0.25 * E - 0.5 * pE;
    if (j < M && beta[j] != 0.0 && tau[j] > 0.0 && tau[j] <= t) {
      const double w = beta[j] * g0.length(j) * g0.d[j].V;
      const double s = t - tau[j];
      pD += w * s * s;
      pE += w * s;
    }
  }
}

// ------------------------------------------------------------ state

EvolutionState::EvolutionState(std::shared_ptr<const LagrangianGrid> initial, BreakingSchedule schedule,
                               const AlphaFunction& alpha, const SolveOptions& opt)
    : g0_(std::move(initial)), schedule_(std::move(schedule)), max_it_(opt.max_iterations) {
  if (!g0_) throw ParameterError("evolution needs an initial grid");
  if (schedule_.times.size() < 2 || schedule_.times.front() != 0.0)
    throw ParameterError("schedule must start at 0 and contain T");
  for (std::size_t k = 1; k < schedule_.times.size(); ++k)
    if (!(schedule_.times[k] > schedule_.times[k - 1]))
      throw ParameterError("schedule must be strictly increasing");
  if (max_it_ < 2) throw ParameterError("max_iterations must be at least 2");

  const double T = schedule_.times.back();
  const std::size_t M = g0_->cells();
  tau_ = snapped_breaking_times(*g0_, T, opt.schedule.merge_tol);
  beta_.assign(M, 0.0);
  w_.resize(M);
  for (std::size_t m = 0; m < M; ++m) w_[m] = g0_->length(m) * g0_->d[m].V;

  const std::size_t K = schedule_.intervals();
  std::vector<std::size_t> count(K + 1, 0);
  std::vector<std::size_t> which(M, K);
  for (std::size_t m = 0; m < M; ++m) {
    if (!(tau_[m] > 0.0 && tau_[m] <= T)) continue;
    const auto it = std::lower_bound(schedule_.times.begin(), schedule_.times.end(), tau_[m]);
    which[m] = static_cast<std::size_t>(it - schedule_.times.begin()) - 1;
    ++count[which[m]];
  }
  group_start_.assign(K + 1, 0);
  for (std::size_t k = 0; k < K; ++k) group_start_[k + 1] = group_start_[k] + count[k];
  order_.resize(group_start_[K]);
  std::vector<std::size_t> fill(group_start_.begin(), group_start_.end() - 1);
  for (std::size_t m = 0; m < M; ++m)
    if (which[m] < K) order_[fill[which[m]]++] = m;

  f0_.assign(M, 0.0);
  f1_.assign(M, 0.0);
  f2_.assign(M, 0.0);

  if (opt.epsilon >= 0.0)
    eps_ = opt.epsilon;
  else if (alpha.lipschitz() > 0.0)
    eps_ = g0_->dx * g0_->dx / alpha.lipschitz();
}

std::span<const std::size_t> EvolutionState::pending() const {
  if (done()) return {};
  return std::span<const std::size_t>(order_).subspan(group_start_[k_],
                                                      group_start_[k_ + 1] - group_start_[k_]);
}

void EvolutionState::finalise(std::size_t cell, double beta) {
  beta_[cell] = beta;
  const double w = beta * w_[cell], t = tau_[cell];
  fenwick_add(f0_, cell, w);
  fenwick_add(f1_, cell, w * t);
  fenwick_add(f2_, cell, w * t * t);
  s0_ += w;
  s1_ += w * t;
  s2_ += w * t * t;
}

double EvolutionState::y_finalised(double t, std::size_t j) const {
  const auto& g = *g0_;
  const double a = g.V[j] - 0.5 * g.V_inf();
  const double tot = t * t * s0_ - 2.0 * t * s1_ + s2_;
  const double pre = t * t * fenwick_prefix(f0_, j) - 2.0 * t * fenwick_prefix(f1_, j) +
                     fenwick_prefix(f2_, j);
  return g.y[j] + g.U[j] * t + 0.25 * a * t * t + 0.125 * tot - 0.25 * pre;
}

LagrangianGrid EvolutionState::grid() const { return state_from_initial(*g0_, beta_, tau_, time()); }

double EvolutionState::V_inf() const { return g0_->V_inf() - s0_; }

double EvolutionState::U_left() const {
  const double t = time();
  return g0_->U.front() - 0.25 * g0_->V_inf() * t + 0.25 * (t * s0_ - s1_);
}

double EvolutionState::zeta_left() const {
  const double t = time();
  return g0_->zeta_left() + g0_->U.front() * t - 0.125 * g0_->V_inf() * t * t +
         0.125 * (t * t * s0_ - 2.0 * t * s1_ + s2_);
}

IntervalReport iterate_interval(EvolutionState& s, const AlphaFunction& alpha) {
  if (s.done()) throw ParameterError("iterate_interval: already at the final time");
  const double t1 = s.schedule_.times[s.k_ + 1];
  IntervalReport rep{s.time(), t1, 1, 0.0, 0};
  const auto B = s.pending();
  rep.breaking_cells = B.size();

  if (!B.empty()) {
    const std::size_t n = B.size();
    if (alpha.is_constant()) {
      const double a = alpha(0.0);
      for (std::size_t c : B) s.finalise(c, a);
    } else {
      std::vector<double> base(n), lever(n), y(n), prev(n, 0.0), cur(n);
      for (std::size_t i = 0; i < n; ++i) {
        base[i] = s.y_finalised(t1, B[i]);
        const double d = std::max(0.0, t1 - s.tau_[B[i]]);
        lever[i] = s.w_[B[i]] * d * d;
      }
      auto eval = [&](const std::vector<double>& b) {
        double tot = 0.0;
        for (std::size_t i = 0; i < n; ++i) tot += b[i] * lever[i];
        double pre = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          y[i] = base[i] + 0.125 * tot - 0.25 * pre;
          pre += b[i] * lever[i];
        }
      };
      std::vector<double> events;
      events.reserve(n + 1);
      for (std::size_t c : B) events.push_back(s.tau_[c]);
      events.push_back(t1);
      std::sort(events.begin(), events.end());
      events.erase(std::unique(events.begin(), events.end()), events.end());
      auto residual = [&]() {
        double worst = 0.0;
        for (double t : events) {
          double tot = 0.0;
          for (std::size_t i = 0; i < n; ++i) {
            const double d = std::max(0.0, t - s.tau_[B[i]]);
            tot += (cur[i] - prev[i]) * s.w_[B[i]] * d * d;
          }
          double pre = 0.0;
          worst = std::max(worst, std::abs(0.125 * tot));
          for (std::size_t i = 0; i < n; ++i) {
            const double d = std::max(0.0, t - s.tau_[B[i]]);
            pre += (cur[i] - prev[i]) * s.w_[B[i]] * d * d;
            worst = std::max(worst, std::abs(0.125 * tot - 0.25 * pre));
          }
        }
        return worst;
      };

      eval(prev);
      bool converged = false;
      for (int it = 2; it <= s.max_it_; ++it) {
        for (std::size_t i = 0; i < n; ++i) cur[i] = alpha(y[i]);
        rep.residual = residual();
        rep.iterations = it;
        if (rep.residual <= s.eps_) {
          converged = true;
          break;
        }
        prev = cur;
        eval(prev);
      }
      if (!converged)
        throw NonContractionError("no contraction on (" + std::to_string(rep.t0) + ", " +
                                      std::to_string(t1) + "] after " + std::to_string(s.max_it_) +
                                      " iterations",
                                  rep.residual);
      for (std::size_t i = 0; i < n; ++i) s.finalise(B[i], cur[i]);
    }
  }
  s.reports_.push_back(rep);
  ++s.k_;
  return rep;
}

Asymptotes update_asymptotes(const EvolutionState& s, double t, std::span<const BrokenCell> cells) {
  const double tk = s.time();
  if (t < tk) throw ParameterError("update_asymptotes: t precedes the current schedule time");
  const auto& g = s.initial();
  const double Uk = s.U_left(), zk = s.zeta_left(), Vk = s.V_inf();
  double e = 0.0, d = 0.0;
  for (const auto& c : cells) {
    if (c.index >= g.cells()) throw ParameterError("update_asymptotes: cell index out of range");
    if (!(c.tau > tk && c.tau <= t)) continue;
    const double w = c.beta * g.length(c.index) * g.d[c.index].V;
    e += w * (t - c.tau);
    d += w * (t - c.tau) * (t - c.tau);
  }
  const double dt = t - tk;
  return {Uk - 0.25 * Vk * dt + 0.25 * e, zk + Uk * dt - 0.125 * Vk * dt * dt + 0.125 * d};
}

// ------------------------------------------------------------ trajectory

Trajectory::Trajectory(std::shared_ptr<const LagrangianGrid> g0, std::vector<double> beta,
                       std::vector<double> tau, BreakingSchedule schedule,
                       std::vector<IntervalReport> reports, double T)
    : g0_(std::move(g0)),
      beta_(std::move(beta)),
      tau_(std::move(tau)),
      schedule_(std::move(schedule)),
      reports_(std::move(reports)),
      T_(T) {}

LagrangianGrid Trajectory::state_at(double t) const {
  if (!(t >= 0.0 && t <= T_)) throw ParameterError("state_at: t outside [0, T]");
  return state_from_initial(*g0_, beta_, tau_, t);
}

void Trajectory::u_nodes(double t, std::vector<double>& y, std::vector<double>& U) const {
  if (!(t >= 0.0 && t <= T_)) throw ParameterError("u_nodes: t outside [0, T]");
  node_values_from_initial(*g0_, beta_, tau_, t, y, U);
}

double Trajectory::energy_at(double t) const {
  double v = g0_->V_inf();
  for (std::size_t m = 0; m < beta_.size(); ++m)
    if (beta_[m] != 0.0 && tau_[m] > 0.0 && tau_[m] <= t) v -= beta_[m] * g0_->length(m) * g0_->d[m].V;
  return v;
}

int Trajectory::max_iterations_used() const {
  int m = 0;
  for (const auto& r : reports_) m = std::max(m, r.iterations);
  return m;
}

const LagrangianGrid* Trajectory::snapshot(double t) const {
  for (const auto& s : snaps_)
    if (s.t == t) return &s.grid;
  return nullptr;
}

void Trajectory::keep_snapshot(double t) {
  if (snapshot(t)) return;
  snaps_.push_back({t, state_at(t)});
  std::sort(snaps_.begin(), snaps_.end(), [](const Snapshot& a, const Snapshot& b) { return a.t < b.t; });
}

Trajectory solve(const LagrangianGrid& grid, const AlphaFunction& alpha, double T,
                 std::span<const double> output_times, const SolveOptions& opt) {
  check_time(T);
  for (double t : output_times)
    if (!(t >= 0.0 && t <= T)) throw ParameterError("output time outside [0, T]");
  auto g0 = std::make_shared<const LagrangianGrid>(grid);
  auto schedule = extract_breaking_times(grid, alpha, T, opt.schedule);
  EvolutionState st(g0, schedule, alpha, opt);
  while (!st.done()) iterate_interval(st, alpha);
  Trajectory tr(g0, st.betas(), st.taus(), schedule, st.reports(), T);
  const std::size_t per = 5 * grid.nodes();
  if (per * schedule.times.size() <= opt.snapshot_budget)
    for (double t : schedule.times) tr.keep_snapshot(t);
  for (double t : output_times) tr.keep_snapshot(t);
  return tr;
}

}  // namespace hsalpha
