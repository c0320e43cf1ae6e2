// hsalpha: command line front end for the alpha-dissipative HS solver.
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hsalpha/analysis.hpp"
#include "hsalpha/builtin.hpp"
#include "hsalpha/errors.hpp"
#include "hsalpha/evolution.hpp"
#include "hsalpha/harness.hpp"
#include "hsalpha/io.hpp"
#include "hsalpha/lagrangian.hpp"
#include "hsalpha/projection.hpp"

namespace fs = std::filesystem;
using namespace hsalpha;

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 2;
constexpr int kNoContraction = 3;
constexpr int kBounds = 4;

struct ValidationFailed {
  std::string what;
};

// a file, or the name of a builtin
InitialData read_data(const std::string& arg) {
  if (fs::exists(arg)) return load_initial_data(arg);
  return builtin::data_by_name(arg);
}

AlphaFunction read_alpha(const std::string& arg) {
  if (fs::exists(arg)) return load_alpha(arg);
  char* end = nullptr;
  const double v = std::strtod(arg.c_str(), &end);
  if (end && *end == '\0' && end != arg.c_str()) {
    if (!(v >= 0.0 && v <= 1.0)) throw ParameterError("constant alpha must lie in [0, 1]");
    return AlphaFunction::constant(v);
  }
  return builtin::alpha_by_name(arg);
}

void require_valid(const InitialData& d, const AlphaFunction* a) {
  const auto rep = validate_initial_data(d, a);
  if (rep.ok()) return;
  std::string msg;
  for (const auto& c : rep.checks)
    if (!c.passed) msg += "  " + c.name + " (worst " + std::to_string(c.worst) + ") " + c.detail + "\n";
  throw ValidationFailed{msg};
}

std::vector<double> parse_times(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ParameterError("bad time '" + item + "'");
    }
  }
  return out;
}

std::string time_tag(double t) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", t);
  return buf;
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-")
    std::cout << text;
  else
    write_file(out, text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"alpha-dissipative Hunter-Saxton solver"};
  app.require_subcommand(1);

  std::string input, out, alpha_arg, times_arg, dump, example = "ex41";
  double dx = 0.0, T = 0.0, t = 0.0;

  auto* proj = app.add_subcommand("project", "project data onto the mesh of width dx");
  proj->add_option("--input", input, "data JSON or builtin name")->required();
  proj->add_option("--dx", dx, "mesh width")->required()->check(CLI::PositiveNumber);
  proj->add_option("--out", out, "output JSON (default stdout)");
  proj->add_option("--dump-lagrangian", dump, "also write the Lagrangian grid");

  auto* sol = app.add_subcommand("solve", "project, evolve and write snapshots");
  sol->add_option("--input", input, "data JSON or builtin name")->required();
  sol->add_option("--alpha", alpha_arg, "alpha JSON, builtin name or constant")->required();
  sol->add_option("--dx", dx, "mesh width")->required()->check(CLI::PositiveNumber);
  sol->add_option("--T", T, "final time")->required()->check(CLI::PositiveNumber);
  sol->add_option("--times", times_arg, "comma separated output times (default T)");
  sol->add_option("--out", out, "output directory")->required();
  sol->add_option("--dump-lagrangian", dump, "write the Lagrangian grid at T");
  SolveOptions sopt;
  sol->add_option("--max-iterations", sopt.max_iterations, "iteration cap per interval")
      ->check(CLI::PositiveNumber);
  bool coarse = false;
  sol->add_flag("--coarse-schedule", coarse, "restart the iteration only at subdivision points");
  sol->add_option("--epsilon", sopt.epsilon, "stopping tolerance (default dx^2 / |alpha'|)")
      ->check(CLI::PositiveNumber);

  auto* ex = app.add_subcommand("exact", "closed-form solution");
  ex->add_option("--example", example, "only ex41")->check(CLI::IsMember({"ex41"}));
  ex->add_option("--t", t, "time")->required()->check(CLI::NonNegativeNumber);
  ex->add_option("--out", out, "output JSON (default stdout)");
  bool csv = false;
  ex->add_flag("--csv", csv, "x,u,F instead of JSON");

  auto* an = app.add_subcommand("analyze", "per cell coincidence sets of the rescaled data");
  an->add_option("--input", input, "data JSON or builtin name")->required();
  an->add_option("--dx", dx, "mesh width")->required()->check(CLI::PositiveNumber);
  an->add_option("--out", out, "output JSON (default stdout)");

  ExperimentConfig cfg;
  std::string custom;
  bool no_timing = false;
  double dx_ref = 0.0, floor = 0.0;
  auto* conv = app.add_subcommand("convergence", "error table over dx = 4^-k");
  conv->add_option("--example", cfg.example, "ex41, ex42, cusp or custom")->required();
  conv->add_option("--input", custom, "data JSON when the example is custom");
  conv->add_option("--alpha", alpha_arg, "alpha JSON, builtin name or constant")->required();
  conv->add_option("--kmin", cfg.kmin, "coarsest level, dx = 4^-kmin")->required();
  conv->add_option("--kmax", cfg.kmax, "finest level")->required();
  conv->add_option("--T", cfg.T, "final time")->required()->check(CLI::PositiveNumber);
  conv->add_option("--out", out, "output directory")->required();
  conv->add_flag("--fast", cfg.fast, "coarser fine-grid reference");
  conv->add_flag("--enforce-bounds", cfg.enforce_bounds, "exit 4 when a bound is violated");
  conv->add_option("--slope-floor", floor, "least squares slope floor for --enforce-bounds");
  conv->add_option("--dx-ref", dx_ref, "fine reference mesh width")->check(CLI::PositiveNumber);
  conv->add_option("--samples", cfg.time_samples, "uniform time samples on [0, T], added to the event times")
      ->check(CLI::Range(2, 1000000));
  conv->add_option("--jobs", cfg.jobs, "worker threads");
  conv->add_flag("--no-timing", no_timing, "write wall_ms as 0");
  bool conv_coarse = false;
  conv->add_flag("--coarse-schedule", conv_coarse, "restart the iteration only at subdivision points");
  bool no_dumps = false;
  conv->add_flag("--no-dumps", no_dumps, "skip per-k solutions");

  CLI11_PARSE(app, argc, argv);

  try {
    if (proj->parsed()) {
      const auto data = read_data(input);
      require_valid(data, nullptr);
      const auto p = project(data, dx);
      emit(out, projected_json(p));
      if (!dump.empty()) write_file(dump, lagrangian_json(to_lagrangian_grid(p)));
      return kOk;
    }
    if (sol->parsed()) {
      const auto data = read_data(input);
      const auto alpha = read_alpha(alpha_arg);
      require_valid(data, &alpha);
      sopt.schedule.restart_at_breaking = !coarse;
      auto times = times_arg.empty() ? std::vector<double>{T} : parse_times(times_arg);
      const auto tr = solve(to_lagrangian_grid(project(data, dx)), alpha, T, times, sopt);
      fs::create_directories(out);
      for (double s : times) {
        const auto e = tr.eulerian_at(s);
        write_file(fs::path(out) / ("t_" + time_tag(s) + ".json"), eulerian_json(e));
        write_solution_csv(e, fs::path(out) / ("t_" + time_tag(s) + ".csv"));
      }
      std::string log = "t0,t1,iterations,residual,breaking_cells\n";
      for (const auto& r : tr.reports())
        log += time_tag(r.t0) + "," + time_tag(r.t1) + "," + std::to_string(r.iterations) + "," +
               time_tag(r.residual) + "," + std::to_string(r.breaking_cells) + "\n";
      write_file(fs::path(out) / "iterations.csv", log);
      if (!dump.empty()) write_file(dump, lagrangian_json(tr.state_at(T)));
      return kOk;
    }
    if (ex->parsed()) {
      const auto e = exact_ex41_solution(t);
      emit(out, csv ? solution_csv(e) : eulerian_json(e));
      return kOk;
    }
    if (an->parsed()) {
      const auto data = read_data(input);
      require_valid(data, nullptr);
      RescalingAnalysis ra(data, project(data, dx));
      const auto cells = ra.coinciding_lengths();
      emit(out, analysis_json(cells, summarize(cells)));
      return kOk;
    }
    if (conv->parsed()) {
      cfg.alpha = read_alpha(alpha_arg);
      cfg.alpha_name = alpha_arg;
      if (!custom.empty()) cfg.data = read_data(custom);
      if (dx_ref > 0.0) cfg.dx_ref = dx_ref;
      if (floor != 0.0) cfg.slope_floor = floor;
      cfg.record_timing = !no_timing;
      cfg.solve.schedule.restart_at_breaking = !conv_coarse;
      if (!no_dumps) cfg.out_dir = out;
      require_valid(cfg.data ? *cfg.data : builtin::data_by_name(cfg.example), &*cfg.alpha);
      const auto rep = run_convergence(cfg);
      write_report(rep, out);
      std::cout << report_csv(rep);
      std::cout << "ls_slope " << rep.ls_slope << "\n";
      int code = kOk;
      for (const auto& r : rep.rows) {
        if (!r.ok) {
          std::cerr << "k=" << r.k << ": " << r.failure << "\n";
          code = std::max(code, r.code);
        }
      }
      if (code != kOk) return code;
      if (cfg.enforce_bounds && !rep.bounds_ok) {
        for (const auto& v : rep.violations) std::cerr << "bound violated: " << v << "\n";
        return kBounds;
      }
      return kOk;
    }
  } catch (const ValidationFailed& v) {
    std::cerr << "validation failed:\n" << v.what;
    return kInvalid;
  } catch (const NonContractionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNoContraction;
  } catch (const CorruptedStateError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kOk;
}
