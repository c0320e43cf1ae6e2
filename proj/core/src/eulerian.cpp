#include "hsalpha/eulerian.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "hsalpha/errors.hpp"

namespace hsalpha {

// ---------------------------------------------------------------- profiles

PiecewiseLinearProfile::PiecewiseLinearProfile(PiecewiseLinearFn u) : u_(std::move(u)) {
  const auto bps = u_.breakpoints();
  for (std::size_t i = 0; i < bps.size(); ++i)
    if (bps[i].left != bps[i].right)
      throw StructuralError("wave profile must be continuous", static_cast<std::ptrdiff_t>(i));
  std::vector<double> xs, es;
  xs.reserve(bps.size());
  es.reserve(bps.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < bps.size(); ++i) {
    if (i > 0) {
      const double len = bps[i].x - bps[i - 1].x;
      const double s = (bps[i].left - bps[i - 1].right) / len;
      acc += s * s * len;
    }
    xs.push_back(bps[i].x);
    es.push_back(acc);
  }
  energy_ = xs.empty() ? PiecewiseLinearFn::constant(0.0) : PiecewiseLinearFn::through(xs, es);
}

std::pair<double, double> PiecewiseLinearProfile::window() const {
  const auto b = u_.breakpoints();
  if (b.empty()) return {0.0, 0.0};
  return {b.front().x, b.back().x};
}

double CuspProfile::value(double x) const {
  if (std::abs(x) >= 1.0) return 1.0;
  return std::cbrt(x * x);
}

double CuspProfile::slope(double x) const {
  if (x <= -1.0 || x >= 1.0 || x == 0.0) return 0.0;
  return (2.0 / 3.0) / std::cbrt(x);
}

double CuspProfile::ac_energy(double x) const {
  if (x <= -1.0) return 0.0;
  if (x >= 1.0) return 8.0 / 3.0;
  return 4.0 / 3.0 * (1.0 + std::cbrt(x));
}

// ------------------------------------------------------------ measure

std::pair<double, double> CuspProfile::increments(double a, double b) const {
  a = std::clamp(a, -1.0, 1.0);
  b = std::clamp(b, -1.0, 1.0);
  const double ca = std::cbrt(a), cb = std::cbrt(b);
  // cb - ca without cancellation when a and b are close
  const double den = ca * ca + ca * cb + cb * cb;
  const double dc = den > 0.0 ? (b - a) / den : 0.0;
  return {dc * (ca + cb), 4.0 / 3.0 * dc};
}

AcCumulative AcCumulative::of(std::shared_ptr<const WaveProfile> u) {
  const double total = u->ac_total();
  return {[u = std::move(u)](double x) { return u->ac_energy(x); }, total};
}

AcCumulative AcCumulative::tabulated(PiecewiseLinearFn f) {
  const double total = f.right_tail();
  return {[f = std::move(f)](double x) { return f(x); }, total};
}

EnergyMeasure::EnergyMeasure(AcCumulative ac, std::vector<Atom> atoms,
                             std::optional<PiecewiseLinearFn> sc_table)
    : ac_(std::move(ac)), atoms_(std::move(atoms)), sc_(std::move(sc_table)) {
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (!std::isfinite(atoms_[i].x) || !std::isfinite(atoms_[i].mass) || atoms_[i].mass <= 0.0)
      throw StructuralError("atom needs finite position and positive mass",
                            static_cast<std::ptrdiff_t>(i));
    if (i > 0 && !(atoms_[i].x > atoms_[i - 1].x))
      throw StructuralError("atoms must be sorted with distinct positions",
                            static_cast<std::ptrdiff_t>(i));
  }
  if (sc_) {
    if (!sc_->is_continuous()) throw StructuralError("sc table must be continuous");
    if (sc_->left_tail() != 0.0) throw StructuralError("sc table must start at zero");
  }
  atom_prefix_.resize(atoms_.size() + 1, 0.0);
  for (std::size_t i = 0; i < atoms_.size(); ++i) atom_prefix_[i + 1] = atom_prefix_[i] + atoms_[i].mass;
}

double EnergyMeasure::discrete_left(double x) const {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x,
                             [](const Atom& a, double v) { return a.x < v; });
  return atom_prefix_.empty() ? 0.0 : atom_prefix_[static_cast<std::size_t>(it - atoms_.begin())];
}

double EnergyMeasure::discrete_right(double x) const {
  auto it = std::upper_bound(atoms_.begin(), atoms_.end(), x,
                             [](double v, const Atom& a) { return v < a.x; });
  return atom_prefix_.empty() ? 0.0 : atom_prefix_[static_cast<std::size_t>(it - atoms_.begin())];
}

double EnergyMeasure::singular_total() const {
  return (atom_prefix_.empty() ? 0.0 : atom_prefix_.back()) + (sc_ ? sc_->right_tail() : 0.0);
}

CumulativeValue cumulative(const EnergyMeasure& mu, double x) {
  const double cont = mu.ac(x) + mu.sc(x);
  return {cont + mu.discrete_left(x), cont + mu.discrete_right(x)};
}

InitialData InitialData::make(std::shared_ptr<const WaveProfile> u, std::vector<Atom> atoms,
                              std::optional<PiecewiseLinearFn> sc_table, std::string name) {
  if (!u) throw StructuralError("initial data needs a wave profile");
  auto [lo, hi] = u->window();
  for (const auto& a : atoms) {
    lo = std::min(lo, a.x);
    hi = std::max(hi, a.x);
  }
  if (sc_table && !sc_table->empty()) {
    lo = std::min(lo, sc_table->breakpoints().front().x);
    hi = std::max(hi, sc_table->breakpoints().back().x);
  }
  if (hi <= lo) hi = lo + 1.0;
  InitialData d;
  d.mu = EnergyMeasure(AcCumulative::of(u), std::move(atoms), std::move(sc_table));
  d.u = std::move(u);
  d.x_min = lo;
  d.x_max = hi;
  d.name = std::move(name);
  return d;
}

// ------------------------------------------------------------ alpha

AlphaFunction::AlphaFunction(std::function<double(double)> f, double lipschitz, std::string name)
    : f_(std::move(f)), lipschitz_(lipschitz), name_(std::move(name)) {
  if (!f_) throw ParameterError("alpha needs a callable");
  if (!(lipschitz_ >= 0.0) || !std::isfinite(lipschitz_))
    throw ParameterError("alpha Lipschitz constant must be finite and non-negative");
}

AlphaFunction AlphaFunction::constant(double a) {
  if (!(a >= 0.0 && a <= 1.0)) throw ParameterError("constant alpha must lie in [0, 1]");
  return AlphaFunction([a](double) { return a; }, 0.0, "const");
}

// ------------------------------------------------------------ validation

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const ValidationCheck* ValidationReport::failed() const {
  for (const auto& c : checks)
    if (!c.passed) return &c;
  return nullptr;
}

namespace {

constexpr std::array<double, 8> kGaussX = {-0.9602898564975363, -0.7966664774136267,
                                           -0.5255324099163290, -0.1834346424956498,
                                           0.1834346424956498,  0.5255324099163290,
                                           0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGaussW = {0.1012285362903763, 0.2223810344533745,
                                           0.3137066278218960, 0.3626837833783620,
                                           0.3626837833783620, 0.3137066278218960,
                                           0.2223810344533745, 0.1012285362903763};

double gauss8(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < 8; ++i) s += kGaussW[i] * f(c + h * kGaussX[i]);
  return s * h;
}

// Graded toward both ends so integrable endpoint singularities are resolved.
double graded_integral(const std::function<double(double)>& f, double a, double b) {
  constexpr int levels = 120;
  const double mid = 0.5 * (a + b);
  double s = 0.0;
  double lo = a, hi = mid;
  for (int l = 0; l < levels; ++l) {
    const double m = lo + 0.5 * (hi - lo);
    s += gauss8(f, m, hi);
    hi = m;
  }
  lo = mid;
  hi = b;
  for (int l = 0; l < levels; ++l) {
    const double m = hi - 0.5 * (hi - lo);
    s += gauss8(f, lo, m);
    lo = m;
  }
  return s;
}

}  // namespace

ValidationReport validate_initial_data(const InitialData& data, const AlphaFunction* alpha,
                                       std::size_t samples) {
  if (!data.u) throw StructuralError("initial data has no wave profile");
  if (!(data.x_max > data.x_min)) throw StructuralError("empty support window");
  if (samples < 2) samples = 2;

  ValidationReport rep;
  rep.total_energy = data.F_total();

  const double pad = 0.25 * (data.x_max - data.x_min) + 1.0;
  const double a = data.x_min - pad, b = data.x_max + pad;
  std::vector<double> xs;
  xs.reserve(samples + data.mu.atoms().size());
  for (std::size_t i = 0; i < samples; ++i)
    xs.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(samples - 1));
  for (const auto& at : data.mu.atoms()) xs.push_back(at.x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  {
    double worst = 0.0, prev = -INFINITY;
    for (double x : xs) {
      auto c = cumulative(data.mu, x);
      worst = std::max({worst, prev - c.left, c.left - c.right});
      prev = c.right;
    }
    rep.checks.push_back({"F nondecreasing", worst <= 1e-12, std::max(worst, 0.0), ""});
  }
  if (const auto& sc = data.mu.sc_table()) {
    // each part of the measure has to be nonnegative on its own
    double worst = 0.0;
    const auto& b = sc->breakpoints();
    for (std::size_t i = 1; i < b.size(); ++i) worst = std::max(worst, b[i - 1].right - b[i].left);
    rep.checks.push_back({"sc nondecreasing", worst <= 1e-12, worst, ""});
  }
  {
    double worst = 0.0;
    for (double x : xs) {
      const double d = 1e-10 * (1.0 + std::abs(x));
      // the ac part can be steep; only the jump part has to be left-continuous
      const double jump = (data.F(x) - data.F(x - d)) - (data.mu.ac(x) - data.mu.ac(x - d));
      worst = std::max(worst, std::abs(jump));
    }
    rep.checks.push_back({"F left-continuous", worst <= 1e-6, worst, ""});
  }
  {
    std::vector<double> knots = data.u->knots();
    knots.push_back(data.x_min);
    knots.push_back(data.x_max);
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    const bool pl = data.u->piecewise_linear() != nullptr;
    double worst = std::abs(data.mu.ac(knots.front()));
    std::string where;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
      const double lo = knots[i], hi = knots[i + 1];
      double expected;
      if (pl) {
        const double s = data.u->slope(lo);
        expected = s * s * (hi - lo);
      } else {
        expected = graded_integral(
            [&](double x) {
              const double s = data.u->slope(x);
              return s * s;
            },
            lo, hi);
      }
      const double got = data.mu.ac(hi) - data.mu.ac(lo);
      const double err = std::abs(got - expected) / (1.0 + std::abs(expected));
      if (err > worst) {
        worst = err;
        where = "segment [" + std::to_string(lo) + ", " + std::to_string(hi) + "]";
      }
    }
    worst = std::max(worst, std::abs(data.mu.ac(knots.back()) - data.mu.ac_total()) /
                                (1.0 + data.mu.ac_total()));
    rep.checks.push_back({"ac density equals u_x^2", worst <= (pl ? 1e-9 : 1e-6), worst, where});
  }
  rep.checks.push_back({"mu equals nu", true, 0.0, "single measure carried for both"});
  {
    const double wl = std::abs(data.u->value(data.x_min) - data.u->value(a));
    const double wr = std::abs(data.u->value(data.x_max) - data.u->value(b));
    rep.checks.push_back({"u constant outside window", std::max(wl, wr) == 0.0, std::max(wl, wr), ""});
  }
  rep.checks.push_back({"finite energy", std::isfinite(rep.total_energy) && rep.total_energy >= 0.0,
                        0.0, ""});
  if (alpha) {
    double range = 0.0, lip = 0.0;
    double prev_x = 0.0, prev_a = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double v = (*alpha)(xs[i]);
      range = std::max({range, -v, v - 1.0});
      if (!std::isfinite(v)) range = INFINITY;
      if (i > 0 && xs[i] > prev_x) {
        const double q = std::abs(v - prev_a) / (xs[i] - prev_x);
        lip = std::max(lip, q - alpha->lipschitz());
      }
      prev_x = xs[i];
      prev_a = v;
    }
    rep.checks.push_back({"alpha in [0, 1]", range <= 0.0, std::max(range, 0.0), ""});
    rep.checks.push_back({"alpha Lipschitz", lip <= 1e-9, std::max(lip, 0.0), ""});
  }
  return rep;
}

// ------------------------------------------------------------ Besov

UniformSamples sample_midpoints(const std::function<double(double)>& f, double a, double b,
                                std::size_t n) {
  if (n == 0 || !(b > a)) throw ParameterError("sample_midpoints: empty range");
  UniformSamples s;
  s.spacing = (b - a) / static_cast<double>(n);
  s.x0 = a + 0.5 * s.spacing;
  s.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.values[i] = f(s.x0 + s.spacing * static_cast<double>(i));
  return s;
}

std::vector<double> geometric_h_grid(std::size_t n, int per_octave, double h_max) {
  if (per_octave <= 0 || !(h_max > 0.0)) throw ParameterError("geometric_h_grid: bad parameters");
  std::vector<double> h(n);
  for (std::size_t i = 0; i < n; ++i)
    h[i] = h_max * std::exp2(-static_cast<double>(i) / per_octave);
  return h;
}

double besov_seminorm_estimate(const UniformSamples& f, double beta, std::span<const double> h_grid) {
  if (h_grid.empty()) throw ParameterError("besov: empty h grid");
  if (!(beta > 0.0 && beta <= 1.0)) throw ParameterError("besov: beta must lie in (0, 1]");
  const double hmin = *std::min_element(h_grid.begin(), h_grid.end());
  if (!(hmin > 0.0) || *std::max_element(h_grid.begin(), h_grid.end()) > 2.0)
    throw ParameterError("besov: h must lie in (0, 2]");
  if (f.spacing > 0.25 * hmin * (1.0 + 1e-12))
    throw ParameterError("besov: sample spacing must be at most min(h)/4");

  const auto n = static_cast<std::ptrdiff_t>(f.values.size());
  auto at = [&](std::ptrdiff_t i) {
    return (i < 0 || i >= n) ? 0.0 : f.values[static_cast<std::size_t>(i)];
  };
  double best = 0.0;
  for (double h : h_grid) {
    const auto k = std::max<std::ptrdiff_t>(1, std::llround(h / f.spacing));
    double s = 0.0;
    for (std::ptrdiff_t i = -k; i < n; ++i) {
      const double d = at(i + k) - at(i);
      s += d * d;
    }
    const double he = static_cast<double>(k) * f.spacing;
    best = std::max(best, std::pow(he, -beta) * std::sqrt(s * f.spacing));
  }
  return best;
}

}  // namespace hsalpha
