#include "hsalpha/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "hsalpha/builtin.hpp"
#include "hsalpha/errors.hpp"
#include "hsalpha/io.hpp"
#include "hsalpha/projection.hpp"

namespace hsalpha {

namespace {

// y = a xi + b on one xi-region
struct Lin {
  double a, b;
  double at(double xi) const { return a * xi + b; }
};

struct Regime {
  Lin y[5], U[5], V[5];
};

Regime regime(double t) {
  const double t2 = t * t;
  if (t < 1.0) {
    return {{{1, -0.75 * t2 + 3 * t},
             {0.25 * t2, -0.75 * t2 + 3 * t},
             {0.125 * (t - 2) * (t - 2), -0.625 * t2 + 3.5 * t - 0.5},
             {0.2 * (t - 1) * (t - 1), -0.85 * t2 + 3.2 * t + 0.4},
             {1, 0.75 * t2 - 6}},
            {{0, -1.5 * t + 3},
             {0.5 * t, -1.5 * t + 3},
             {0.25 * (t - 2), -1.25 * t + 3.5},
             {0.4 * (t - 1), -1.7 * t + 3.2},
             {0, 1.5 * t}},
            {{0, 0}, {1, 0}, {0.5, 0.5}, {0.8, -0.4}, {0, 6}}};
  }
  if (t < 2.0) {
    return {{{1, -0.375 * t2 + 2.25 * t + 0.375},
             {0.25 * t2, -0.375 * t2 + 2.25 * t + 0.375},
             {0.125 * (t - 2) * (t - 2), -0.25 * t2 + 2.75 * t - 0.125},
             {0.05 * (t - 1) * (t - 1), -0.025 * t2 + 1.55 * t + 1.225},
             {1, 0.375 * t2 + 0.75 * t - 6.375}},
            {{0, -0.75 * t + 2.25},
             {0.5 * t, -0.75 * t + 2.25},
             {0.25 * (t - 2), -0.5 * t + 2.75},
             {0.1 * (t - 1), -0.05 * t + 1.55},
             {0, 0.75 * t + 0.75}},
            {{0, 0}, {1, 0}, {0.5, 0.5}, {0.2, 1.4}, {0, 3}}};
  }
  return {{{1, -21.0 / 80 * t2 + 1.8 * t + 33.0 / 40},
           {0.25 * t2, -21.0 / 80 * t2 + 1.8 * t + 33.0 / 40},
           {(t - 2) * (t - 2) / 80.0, -0.025 * t2 + 1.85 * t + 31.0 / 40},
           {0.05 * (t - 1) * (t - 1), -11.0 / 80 * t2 + 2 * t + 31.0 / 40},
           {1, 21.0 / 80 * t2 + 1.2 * t - 273.0 / 40}},
          {{0, -21.0 / 40 * t + 1.8},
           {0.5 * t, -21.0 / 40 * t + 1.8},
           {(t - 2) / 40.0, -0.05 * t + 1.85},
           {0.1 * (t - 1), -11.0 / 40 * t + 2},
           {0, 21.0 / 40 * t + 1.2}},
          {{0, 0}, {1, 0}, {0.05, 0.95}, {0.2, 0.5}, {0, 2.1}}};
}

int xi_region(double xi) {
  if (xi <= 0.0) return 0;
  if (xi <= 1.0) return 1;
  if (xi <= 3.0) return 2;
  if (xi <= 8.0) return 3;
  return 4;
}

void check_t(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw ParameterError("time must be finite and nonnegative");
}

// Monotone evaluation of a node curve at nondecreasing x.
struct Walker {
  const NodeCurve& c;
  std::size_t i = 0;
  double at(double x) {
    const std::size_t n = c.y.size();
    while (i < n && c.y[i] < x) ++i;
    if (i == 0) return c.U.front();
    if (i == n) return c.U.back();
    if (c.y[i] == x) return c.U[i];
    const double h = c.y[i] - c.y[i - 1];
    if (!(h > 0.0)) return c.U[i];
    const double s = (x - c.y[i - 1]) / h;
    return c.U[i - 1] + s * (c.U[i] - c.U[i - 1]);
  }
};

std::string fmt17(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool matches_ex41_alpha(const AlphaFunction& a) {
  return std::abs(a(11.0 / 4.0) - 0.75) <= 1e-14 && std::abs(a(35.0 / 8.0) - 0.9) <= 1e-14;
}

}  // namespace

// ---------------------------------------------------------------- ex41

EulerianPoint exact_ex41(double t, double x) {
  check_t(t);
  const double t2 = t * t;
  double b[4], u[5], F[5];
  if (t < 1.0) {
    b[0] = -0.75 * t2 + 3 * t;
    b[1] = -0.5 * t2 + 3 * t;
    b[2] = -0.25 * t2 + 2 * t + 1;
    b[3] = 0.75 * t2 + 2;
    if (x <= b[0]) return {-1.5 * t + 3, 0.0};
    if (x <= b[1]) return {2 / t * (x - 1.5 * t), 4 / t2 * (x + 0.75 * t2 - 3 * t)};
    if (x <= b[2])
      return {2 / (t - 2) * (x - 0.5 * t - 3), 4 / ((t - 2) * (t - 2)) * (x + 0.75 * t2 - 4 * t + 1)};
    if (x <= b[3])
      return {2 / (t - 1) * (x - 0.75 * t - 2), 4 / ((t - 1) * (t - 1)) * (x + 0.75 * t2 - 3 * t - 0.5)};
    return {1.5 * t, 6.0};
  }
  if (t < 2.0) {
    b[0] = -0.375 * t2 + 2.25 * t + 0.375;
    b[1] = -0.125 * t2 + 2.25 * t + 0.375;
    b[2] = 0.125 * t2 + 1.25 * t + 1.375;
    b[3] = 0.375 * t2 + 0.75 * t + 1.625;
    u[0] = -0.75 * t + 2.25;
    u[1] = 2 / t * (x - 1.125 * t - 0.375);
    u[2] = 2 / (t - 2) * (x - 0.875 * t - 2.625);
    u[3] = 2 / (t - 1) * (x - 0.75 * t - 2);
    u[4] = 0.75 * t + 0.75;
    F[0] = 0.0;
    F[1] = 4 / t2 * (x + 0.375 * t2 - 2.25 * t - 0.375);
    F[2] = 4 / ((t - 2) * (t - 2)) * (x + 0.375 * t2 - 3.25 * t + 0.625);
    F[3] = 4 / ((t - 1) * (t - 1)) * (x + 0.375 * t2 - 2.25 * t - 0.875);
    F[4] = 3.0;
  } else {
    b[0] = -21.0 / 80 * t2 + 1.8 * t + 33.0 / 40;
    b[1] = -1.0 / 80 * t2 + 1.8 * t + 33.0 / 40;
    b[2] = 1.0 / 80 * t2 + 1.7 * t + 37.0 / 40;
    b[3] = 21.0 / 80 * t2 + 1.2 * t + 47.0 / 40;
    u[0] = -21.0 / 40 * t + 1.8;
    u[1] = 2 / t * (x - 0.9 * t - 33.0 / 40);
    u[2] = 2 / (t - 2) * (x - 0.875 * t - 2.625);
    u[3] = 2 / (t - 1) * (x - 69.0 / 80 * t - 71.0 / 40);
    u[4] = 21.0 / 40 * t + 1.2;
    F[0] = 0.0;
    F[1] = 4 / t2 * (x + 21.0 / 80 * t2 - 1.8 * t - 33.0 / 40);
    F[2] = 4 / ((t - 2) * (t - 2)) * (x + 21.0 / 80 * t2 - 2.8 * t + 7.0 / 40);
    F[3] = 4 / ((t - 1) * (t - 1)) * (x + 21.0 / 80 * t2 - 2.25 * t - 26.0 / 40);
    F[4] = 2.1;
  }
  int r = 4;
  for (int k = 0; k < 4; ++k)
    if (x <= b[k]) {
      r = k;
      break;
    }
  return {u[r], F[r]};
}

LagrangianPoint exact_lagrangian_ex41(double t, double xi) {
  check_t(t);
  if (!std::isfinite(xi)) throw ParameterError("xi must be finite");
  const Regime g = regime(t);
  const int r = xi_region(xi);
  static const Lin H[5] = {{0, 0}, {1, 0}, {0.5, 0.5}, {0.8, -0.4}, {0, 6}};
  return {g.y[r].at(xi), g.U[r].at(xi), g.V[r].at(xi), H[r].at(xi)};
}

LagrangianGrid exact_ex41_grid(double t) {
  check_t(t);
  LagrangianGrid g;
  g.t = t;
  for (double xi : {0.0, 1.0, 3.0, 8.0}) {
    const auto p = exact_lagrangian_ex41(t, xi);
    g.xi.push_back(xi);
    g.y.push_back(p.y);
    g.U.push_back(p.U);
    g.V.push_back(p.V);
    g.H.push_back(p.H);
  }
  for (std::size_t m = 0; m + 1 < g.xi.size(); ++m) {
    const double L = g.length(m);
    g.d.push_back({(g.y[m + 1] - g.y[m]) / L, (g.U[m + 1] - g.U[m]) / L, (g.V[m + 1] - g.V[m]) / L,
                   (g.H[m + 1] - g.H[m]) / L});
  }
  return g;
}

EulerianSolution exact_ex41_solution(double t) { return to_eulerian(exact_ex41_grid(t)); }

std::vector<double> exact_ex41_breaking_times() { return {1.0, 2.0}; }

// ---------------------------------------------------------------- sources

TrajectorySource::TrajectorySource(std::shared_ptr<const Trajectory> traj, bool events)
    : traj_(std::move(traj)), events_(events) {
  if (!traj_) throw ParameterError("TrajectorySource needs a trajectory");
}

void TrajectorySource::u_curve(double t, NodeCurve& out) const { traj_->u_nodes(t, out.y, out.U); }

std::vector<double> TrajectorySource::event_times() const {
  if (!events_) return {};
  return traj_->schedule().times;
}

void Ex41Source::u_curve(double t, NodeCurve& out) const {
  const auto g = exact_ex41_grid(t);
  out.y = g.y;
  out.U = g.U;
}

double sup_distance(const NodeCurve& a, const NodeCurve& b) {
  if (a.y.empty() || b.y.empty() || a.y.size() != a.U.size() || b.y.size() != b.U.size())
    throw ParameterError("sup_distance: malformed node curve");
  // both sets of nodes, plus the far tails
  double worst = std::abs(a.U.front() - b.U.front());
  worst = std::max(worst, std::abs(a.U.back() - b.U.back()));
  Walker wb{b};
  for (std::size_t i = 0; i < a.y.size(); ++i) worst = std::max(worst, std::abs(a.U[i] - wb.at(a.y[i])));
  Walker wa{a};
  for (std::size_t i = 0; i < b.y.size(); ++i) worst = std::max(worst, std::abs(b.U[i] - wa.at(b.y[i])));
  return worst;
}

double relative_error(const SolutionSource& ref, const SolutionSource& num, double T, int n_t) {
  if (!(T > 0.0) || !std::isfinite(T)) throw ParameterError("relative_error: T must be positive");
  if (n_t < 2) throw ParameterError("relative_error: need at least the two end points in time");
  const auto n = static_cast<std::size_t>(n_t - 1);
  std::vector<double> ts;
  ts.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) ts.push_back(T * static_cast<double>(i) / static_cast<double>(n));
  for (const SolutionSource* s : {&ref, &num})
    for (double t : s->event_times())
      if (t >= 0.0 && t <= T) ts.push_back(t);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

  NodeCurve r, u;
  double worst = 0.0;
  for (double t : ts) {
    ref.u_curve(t, r);
    num.u_curve(t, u);
    double norm = 0.0;
    for (double v : r.U) norm = std::max(norm, std::abs(v));
    if (!(norm > 0.0)) throw DegenerateReferenceError("reference u vanishes at t = " + std::to_string(t));
    worst = std::max(worst, sup_distance(r, u) / norm);
  }
  return worst;
}

// ---------------------------------------------------------------- EOC

double mesh_width(int k) { return std::pow(4.0, -k); }

void compute_eoc(ConvergenceReport& rep) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    auto& r = rep.rows[i];
    r.eoc = nan;
    if (i > 0) {
      const auto& p = rep.rows[i - 1];
      if (p.ok && r.ok && p.err > 0.0 && r.err > 0.0)
        r.eoc = std::log(p.err / r.err) / std::log(p.dx / r.dx);
    }
    if (r.ok && r.err > 0.0) {
      const double x = std::log(r.dx), y = std::log(r.err);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++n;
    }
  }
  if (n >= 2) {
    const double d = n * sxx - sx * sx;
    rep.ls_slope = (n * sxy - sx * sy) / d;
    rep.ls_intercept = (sy - rep.ls_slope * sx) / n;
  } else {
    rep.ls_slope = rep.ls_intercept = nan;
  }
}

ConvergenceReport run_convergence(const ExperimentConfig& cfg) {
  if (cfg.kmin < 0 || cfg.kmax < cfg.kmin || cfg.kmax > 12)
    throw ParameterError("convergence: need 0 <= kmin <= kmax <= 12");
  if (!(cfg.T > 0.0) || !std::isfinite(cfg.T)) throw ParameterError("convergence: T must be positive");
  const InitialData data = cfg.data ? *cfg.data : builtin::data_by_name(cfg.example);
  if (!cfg.alpha) throw ParameterError("convergence: alpha is required");
  const AlphaFunction alpha = *cfg.alpha;

  ConvergenceReport rep;
  rep.example = cfg.example;
  rep.alpha = cfg.alpha_name.empty() ? alpha.name() : cfg.alpha_name;
  rep.T = cfg.T;

  // reference
  std::unique_ptr<SolutionSource> ref;
  const auto* pl = data.u ? data.u->piecewise_linear() : nullptr;
  if (cfg.example == "ex41" && !cfg.data && matches_ex41_alpha(alpha)) {
    ref = std::make_unique<Ex41Source>();
    rep.reference = "closed-form";
  } else if (pl && !data.mu.sc_table() && !cfg.dx_ref) {
    SolveOptions o = cfg.solve;
    o.snapshot_budget = 0;
    auto tr = std::make_shared<const Trajectory>(solve(lagrangian_grid_from_data(data), alpha, cfg.T, {}, o));
    ref = std::make_unique<TrajectorySource>(tr, true);
    rep.reference = "exact-grid";
  } else {
    const double dref = cfg.dx_ref ? *cfg.dx_ref : (cfg.fast ? mesh_width(8) : 1e-5);
    SolveOptions o = cfg.solve;
    o.snapshot_budget = 0;
    auto tr = std::make_shared<const Trajectory>(
        solve(to_lagrangian_grid(project(data, dref)), alpha, cfg.T, {}, o));
    // the fine grid breaks too often to sample every one of its events
    ref = std::make_unique<TrajectorySource>(tr, false);
    std::ostringstream os;
    os << "fine-grid dx=" << dref;
    rep.reference = os.str();
  }

  const int nrows = cfg.kmax - cfg.kmin + 1;
  rep.rows.resize(static_cast<std::size_t>(nrows));
  std::atomic<int> next{0};
  std::mutex io_mutex;

  auto work = [&]() {
    for (int i = next++; i < nrows; i = next++) {
      auto& row = rep.rows[static_cast<std::size_t>(i)];
      row.k = cfg.kmin + i;
      row.dx = mesh_width(row.k);
      const auto start = std::chrono::steady_clock::now();
      try {
        SolveOptions o = cfg.solve;
        o.snapshot_budget = 0;
        const std::vector<double> out{cfg.T};
        auto tr = std::make_shared<Trajectory>(
            solve(to_lagrangian_grid(project(data, row.dx)), alpha, cfg.T, out, o));
        row.iterations = tr->max_iterations_used();
        TrajectorySource num(tr, true);
        row.err = relative_error(*ref, num, cfg.T, cfg.time_samples);
        if (cfg.enforce_bounds) {
          double prev = std::numeric_limits<double>::infinity();
          for (double t : tr->schedule().times) {
            const double e = tr->energy_at(t);
            if (e > prev * (1.0 + 1e-12) + 1e-12) {
              std::lock_guard lk(io_mutex);
              rep.violations.push_back("k=" + std::to_string(row.k) + ": energy increases at t=" + fmt17(t));
            }
            prev = e;
          }
          if (row.iterations > 3) {
            std::lock_guard lk(io_mutex);
            rep.violations.push_back("k=" + std::to_string(row.k) + ": " + std::to_string(row.iterations) +
                                     " iterations");
          }
        }
        if (!cfg.out_dir.empty()) {
          std::lock_guard lk(io_mutex);
          std::filesystem::create_directories(cfg.out_dir);
          write_solution_csv(tr->eulerian_at(cfg.T), cfg.out_dir / ("solution_k" + std::to_string(row.k) + ".csv"));
        }
      } catch (const NonContractionError& e) {
        row.ok = false;
        row.code = 3;
        row.failure = e.what();
      } catch (const Error& e) {
        row.ok = false;
        row.code = 2;
        row.failure = e.what();
      }
      if (!row.ok) row.err = std::numeric_limits<double>::quiet_NaN();
      const auto stop = std::chrono::steady_clock::now();
      row.wall_ms = cfg.record_timing ? std::chrono::duration<double, std::milli>(stop - start).count() : 0.0;
    }
  };

  unsigned jobs = cfg.jobs ? cfg.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, static_cast<unsigned>(nrows));
  if (jobs <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  compute_eoc(rep);
  std::sort(rep.violations.begin(), rep.violations.end());
  if (cfg.enforce_bounds && cfg.slope_floor && !(rep.ls_slope >= *cfg.slope_floor))
    rep.violations.push_back("LS slope " + fmt17(rep.ls_slope) + " below " + fmt17(*cfg.slope_floor));
  rep.bounds_ok = rep.violations.empty();
  return rep;
}

std::string report_csv(const ConvergenceReport& rep) {
  std::string s = "k,dx,err,eoc,wall_ms\n";
  for (const auto& r : rep.rows)
    s += std::to_string(r.k) + "," + fmt17(r.dx) + "," + fmt17(r.err) + "," + fmt17(r.eoc) + "," +
         fmt17(r.wall_ms) + "\n";
  return s;
}

void write_report(const ConvergenceReport& rep, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw Error(std::string("cannot write ") + (dir / name).string());
    return f;
  };
  {
    auto f = open("report.csv");
    f << report_csv(rep);
  }
  {
    auto f = open("loglog.dat");
    f << "# ln_dx ln_err\n";
    for (const auto& r : rep.rows)
      if (r.ok && r.err > 0.0) f << fmt17(std::log(r.dx)) << " " << fmt17(std::log(r.err)) << "\n";
  }
  nlohmann::ordered_json j;
  auto num = [](double v) -> nlohmann::ordered_json {
    if (std::isfinite(v)) return v;
    return nullptr;
  };
  j["example"] = rep.example;
  j["alpha"] = rep.alpha;
  j["T"] = rep.T;
  j["reference"] = rep.reference;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : rep.rows) {
    nlohmann::ordered_json o;
    o["k"] = r.k;
    o["dx"] = r.dx;
    o["err"] = num(r.err);
    o["eoc"] = num(r.eoc);
    o["wall_ms"] = r.wall_ms;
    o["iterations"] = r.iterations;
    o["ok"] = r.ok;
    if (!r.ok) o["failure"] = r.failure;
    j["rows"].push_back(o);
  }
  j["ls_slope"] = num(rep.ls_slope);
  j["ls_intercept"] = num(rep.ls_intercept);
  j["bounds_ok"] = rep.bounds_ok;
  j["violations"] = rep.violations;
  auto f = open("report.json");
  f << j.dump(2) << "\n";
}

}  // namespace hsalpha
