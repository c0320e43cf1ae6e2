#include "hsalpha/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hsalpha/builtin.hpp"
#include "hsalpha/errors.hpp"

namespace hsalpha {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParameterError(std::string("invalid JSON: ") + e.what());
  }
}

double number(const json& v, const char* what) {
  if (!v.is_number()) throw ParameterError(std::string(what) + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ParameterError(std::string(what) + " must be finite");
  return d;
}

std::vector<std::pair<double, double>> pairs(const json& v, const char* what) {
  if (!v.is_array()) throw ParameterError(std::string(what) + " must be an array of pairs");
  std::vector<std::pair<double, double>> out;
  for (const auto& p : v) {
    if (!p.is_array() || p.size() != 2) throw ParameterError(std::string(what) + " entries must be [x, v]");
    out.emplace_back(number(p[0], what), number(p[1], what));
  }
  return out;
}

PiecewiseLinearFn through(const std::vector<std::pair<double, double>>& p) {
  std::vector<double> xs, vs;
  for (auto [x, v] : p) {
    xs.push_back(x);
    vs.push_back(v);
  }
  return PiecewiseLinearFn::through(xs, vs);
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ojson fn_json(const PiecewiseLinearFn& f) {
  ojson j;
  j["left"] = f.left_tail();
  j["right"] = f.right_tail();
  auto& b = j["breakpoints"] = ojson::array();
  for (const auto& p : f.breakpoints()) b.push_back({p.x, p.left, p.right});
  return j;
}

}  // namespace

InitialData initial_data_from_json(const std::string& text) {
  const json j = parse(text);
  if (!j.is_object() || !j.contains("u")) throw ParameterError("initial data needs a \"u\" entry");
  const json& u = j["u"];
  std::shared_ptr<const WaveProfile> profile;
  std::vector<Atom> atoms;
  std::optional<PiecewiseLinearFn> sc;
  std::string name = "custom";
  if (u.contains("builtin")) {
    if (!u["builtin"].is_string()) throw ParameterError("u.builtin must be a string");
    const InitialData b = builtin::data_by_name(u["builtin"].get<std::string>());
    profile = b.u;
    atoms.assign(b.mu.atoms().begin(), b.mu.atoms().end());
    sc = b.mu.sc_table();
    name = b.name;
  } else {
    if (!u.contains("breakpoints")) throw ParameterError("u needs \"breakpoints\" or \"builtin\"");
    const auto bp = pairs(u["breakpoints"], "u.breakpoints");
    if (bp.empty()) throw ParameterError("u.breakpoints is empty");
    const double l = u.contains("left") ? number(u["left"], "u.left") : bp.front().second;
    const double r = u.contains("right") ? number(u["right"], "u.right") : bp.back().second;
    std::vector<Breakpoint> b;
    for (auto [x, v] : bp) b.push_back({x, v, v});
    profile = std::make_shared<PiecewiseLinearProfile>(PiecewiseLinearFn(std::move(b), l, r));
  }
  // explicit entries replace what a builtin brought along
  if (j.contains("atoms")) {
    atoms.clear();
    for (auto [x, m] : pairs(j["atoms"], "atoms")) atoms.push_back({x, m});
    std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.x < b.x; });
  }
  if (j.contains("sc_table")) {
    const auto p = pairs(j["sc_table"], "sc_table");
    if (p.empty())
      sc.reset();
    else
      sc = through(p);
  }
  return InitialData::make(std::move(profile), std::move(atoms), std::move(sc), name);
}

AlphaFunction alpha_from_json(const std::string& text) {
  const json j = parse(text);
  if (!j.is_object()) throw ParameterError("alpha must be a JSON object");
  if (j.contains("builtin")) {
    if (!j["builtin"].is_string()) throw ParameterError("alpha.builtin must be a string");
    const std::string n = j["builtin"].get<std::string>();
    if (n == "cusp" && j.contains("b")) return builtin::alpha_cusp(number(j["b"], "alpha.b"));
    return builtin::alpha_by_name(n);
  }
  if (j.contains("const")) {
    const double a = number(j["const"], "alpha.const");
    if (a < 0.0 || a > 1.0) throw ParameterError("alpha.const must lie in [0, 1]");
    return AlphaFunction::constant(a);
  }
  if (j.contains("breakpoints")) {
    const auto p = pairs(j["breakpoints"], "alpha.breakpoints");
    if (p.empty()) throw ParameterError("alpha.breakpoints is empty");
    auto f = through(p);
    double steepest = 0.0;
    for (std::size_t i = 0; i + 1 < p.size(); ++i)
      steepest = std::max(steepest, std::abs(p[i + 1].second - p[i].second) / (p[i + 1].first - p[i].first));
    for (auto [x, a] : p)
      if (a < 0.0 || a > 1.0) throw ParameterError("alpha values must lie in [0, 1]");
    double L = steepest;
    if (j.contains("lipschitz")) {
      L = number(j["lipschitz"], "alpha.lipschitz");
      if (L < steepest * (1.0 - 1e-12))
        throw ParameterError("alpha.lipschitz " + g17(L) + " is below the steepest slope " + g17(steepest));
    }
    return AlphaFunction([f](double x) { return f(x); }, L, "breakpoints");
  }
  throw ParameterError("alpha needs \"builtin\", \"const\" or \"breakpoints\"");
}

std::string read_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ParameterError("cannot read " + file.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::filesystem::path& file, const std::string& text) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error("cannot write " + file.string());
  out << text;
}

InitialData load_initial_data(const std::filesystem::path& file) {
  return initial_data_from_json(read_file(file));
}

AlphaFunction load_alpha(const std::filesystem::path& file) { return alpha_from_json(read_file(file)); }

std::string projected_json(const ProjectedData& p) {
  ojson j;
  j["dx"] = p.dx();
  j["j_first"] = p.j_first();
  auto& cells = j["cells"] = ojson::array();
  for (std::size_t c = 0; c < p.cell_count(); ++c) {
    const auto& d = p.cells()[c];
    ojson o;
    o["x"] = p.x(p.j_first() + 2 * static_cast<long>(c));
    o["u"] = d.u0;
    o["du"] = d.du;
    o["q"] = d.q;
    o["sign"] = d.sign;
    o["F_ac"] = d.f_ac0;
    o["F_sing"] = d.f_sing;
    cells.push_back(o);
  }
  j["x_end"] = p.x_right();
  j["u_end"] = p.u_end();
  j["F_ac_end"] = p.f_ac_end();
  j["u"] = fn_json(p.u_fn());
  j["F"] = fn_json(p.F_fn());
  return j.dump(2) + "\n";
}

std::string lagrangian_json(const LagrangianGrid& g) {
  ojson j;
  j["t"] = g.t;
  j["dx"] = g.dx;
  j["xi"] = g.xi;
  j["y"] = g.y;
  j["U"] = g.U;
  j["V"] = g.V;
  j["H"] = g.H;
  auto& d = j["derivs"] = ojson::array();
  for (const auto& c : g.d) d.push_back({c.y, c.U, c.V, c.H});
  auto& t = j["tau"] = ojson::array();
  for (double v : breaking_times(g)) {
    if (std::isfinite(v))
      t.push_back(v);
    else
      t.push_back(nullptr);
  }
  return j.dump(2) + "\n";
}

std::string eulerian_json(const EulerianSolution& s) {
  ojson j;
  j["t"] = s.t;
  j["u"] = fn_json(s.u);
  j["F"] = fn_json(s.F);
  j["G"] = fn_json(s.G);
  return j.dump(2) + "\n";
}

std::string analysis_json(const std::vector<CellLengths>& cells, const CoincidenceSummary& sum) {
  ojson j;
  auto& a = j["cells"] = ojson::array();
  for (const auto& c : cells) {
    ojson o;
    o["cell"] = c.cell;
    o["x"] = c.x_left;
    o["meas_B"] = c.meas_B;
    o["meas_B_dx"] = c.meas_B_dx;
    o["meas_B_dx_exact"] = c.meas_B_dx_exact;
    o["nu_sing"] = c.nu_sing;
    a.push_back(o);
  }
  j["worst_pair"] = sum.worst_pair;
  j["worst_half_mass"] = sum.worst_half_mass;
  return j.dump(2) + "\n";
}

std::string solution_csv(const EulerianSolution& s) {
  std::vector<double> xs = s.u.knots();
  const auto fk = s.F.knots();
  xs.insert(xs.end(), fk.begin(), fk.end());
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::string out = "x,u,F\n";
  for (double x : xs) out += g17(x) + "," + g17(s.u(x)) + "," + g17(s.F(x)) + "\n";
  return out;
}

void write_solution_csv(const EulerianSolution& sol, const std::filesystem::path& file) {
  write_file(file, solution_csv(sol));
}

}  // namespace hsalpha
