#include "hsalpha/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "hsalpha/errors.hpp"

namespace hsalpha {

PiecewiseLinearFn cumulative_fn(const InitialData& data) {
  if (!data.u || !data.u->piecewise_linear())
    throw ParameterError("cumulative_fn needs piecewise linear data");
  std::vector<double> k = data.u->knots();
  for (const auto& a : data.mu.atoms()) k.push_back(a.x);
  if (data.mu.sc_table())
    for (double x : data.mu.sc_table()->knots()) k.push_back(x);
  std::sort(k.begin(), k.end());
  k.erase(std::unique(k.begin(), k.end()), k.end());
  std::vector<Breakpoint> b;
  b.reserve(k.size());
  for (double x : k) {
    const auto c = cumulative(data.mu, x);
    b.push_back({x, c.left, c.right});
  }
  if (b.empty()) return PiecewiseLinearFn::constant(0.0);
  const double l = b.front().left, r = b.back().right;
  return PiecewiseLinearFn(std::move(b), l, r);
}

double combined_Y(const PiecewiseLinearFn& G, const PiecewiseLinearFn& G_dx, double r) {
  const double span = std::max({std::abs(G.right_tail()), std::abs(G_dx.right_tail()),
                                std::abs(G.left_tail()), std::abs(G_dx.left_tail())});
  double lo = r - span - 1.0, hi = r + span + 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-14 * (1.0 + std::abs(r)); ++it) {
    const double m = 0.5 * (lo + hi);
    if (m + 0.5 * (G(m) + G_dx(m)) < r)
      lo = m;
    else
      hi = m;
  }
  return 0.5 * (lo + hi);
}

RescalingAnalysis::RescalingAnalysis(const InitialData& data, const ProjectedData& proj)
    : G_(cumulative_fn(data)),
      G_dx_(proj.F_fn()),
      h_(identity_plus_inverse_shift(G_)),
      h_dx_(identity_plus_inverse_shift(G_dx_)),
      h_mix_(identity_plus_inverse_shift((G_ + G_dx_).scaled(0.5))),
      grid_dx_(to_lagrangian_grid(proj)) {
  has_sc_ = data.mu.sc_table().has_value();
  half_range_ = 0.5 * std::max(G_.right_tail(), G_dx_.right_tail()) + 1.0;
  const std::size_t n = proj.cell_count();
  cell_x_.resize(n + 1);
  nu_sing_.resize(n);
  for (std::size_t c = 0; c <= n; ++c) cell_x_[c] = proj.x(proj.j_first() + 2 * static_cast<long>(c));
  for (std::size_t c = 0; c < n; ++c)
    nu_sing_[c] = data.mu.singular_left(cell_x_[c + 1]) - data.mu.singular_left(cell_x_[c]);
}

RescalingPair RescalingAnalysis::pair(double r) const {
  // g is nondecreasing; phi is where it first reaches zero
  auto g = [&](double xi) { return y_bar(xi) - y_bar_dx(2.0 * r - xi); };
  double lo = r - half_range_, hi = r + half_range_;
  for (int it = 0; it < 200 && hi - lo > 1e-14 * (1.0 + std::abs(r)); ++it) {
    const double m = 0.5 * (lo + hi);
    if (g(m) < 0.0)
      lo = m;
    else
      hi = m;
  }
  const double phi = hi;
  return {phi, 2.0 * r - phi};
}

std::vector<double> RescalingAnalysis::r_breakpoints() const {
  std::vector<double> r;
  std::vector<double> xs = G_.knots();
  const auto kd = G_dx_.knots();
  xs.insert(xs.end(), kd.begin(), kd.end());
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  r.reserve(4 * xs.size());
  for (double x : xs) {
    const double gl = G_(x), gr = G_.right_limit(x);
    const double dl = G_dx_(x), dr = G_dx_.right_limit(x);
    r.push_back(x + 0.5 * (gl + dl));
    r.push_back(x + 0.5 * (gr + dr));
    r.push_back(x + 0.5 * (gl + dr));
    r.push_back(x + 0.5 * (gr + dl));
  }
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
  return r;
}

std::vector<CellLengths> RescalingAnalysis::coinciding_lengths(double step, double threshold) const {
  std::vector<double> br = r_breakpoints();
  const auto& an = grid_dx_.anchors;
  for (std::size_t a : an) br.push_back(grid_dx_.xi[a]);
  for (std::size_t c = 0; c + 1 < an.size(); ++c)
    br.push_back(0.5 * (grid_dx_.xi[an[c]] + grid_dx_.xi[an[c] + 1]));
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());

  std::vector<CellLengths> out;
  out.reserve(nu_sing_.size());
  std::size_t p = 0;
  for (std::size_t c = 0; c + 1 < an.size(); ++c) {
    const double a = grid_dx_.xi[an[c]], b = grid_dx_.xi[an[c + 1]];
    CellLengths cl{c, cell_x_[c], 0.0, 0.0, 0.5 * (grid_dx_.xi[an[c] + 1] - a), nu_sing_[c]};
    while (p < br.size() && br[p] < a) ++p;
    for (std::size_t q = p; q + 1 < br.size() && br[q] < b; ++q) {
      const double lo = std::max(br[q], a), hi = std::min(br[q + 1], b);
      const double len = hi - lo;
      if (!(len > 1e-13)) continue;
      const double mid = 0.5 * (lo + hi);
      if (has_sc_) {
        const double h = std::min(step, 0.25 * len);
        const double dpsi = (pair(mid + h).psi - pair(mid - h).psi) / (2.0 * h);
        if (dpsi < threshold) cl.meas_B += len;
        if (2.0 - dpsi < threshold) cl.meas_B_dx += len;
        continue;
      }
      // phi and psi are linear here; psi' = 0 exactly where y_bar is flat at phi
      const auto pm = pair(mid);
      bool flat = 1.0 - h_.slope(pm.phi) <= 1e-12, flat_dx = 1.0 - h_dx_.slope(pm.psi) <= 1e-12;
      if (flat && flat_dx) {
        // both on plateaus: the smallest-phi rule decides, and psi' is 0 or 2
        const double h = std::min(step, 0.25 * len);
        flat = (pair(mid + h).psi - pair(mid - h).psi) / (2.0 * h) < 1.0;
        flat_dx = !flat;
      }
      if (flat) cl.meas_B += len;
      if (flat_dx) cl.meas_B_dx += len;
    }
    out.push_back(cl);
  }
  return out;
}

CoincidenceSummary summarize(const std::vector<CellLengths>& cells) {
  CoincidenceSummary s{0.0, 0.0};
  for (const auto& c : cells) {
    s.worst_pair = std::max(s.worst_pair, std::abs(c.meas_B - c.meas_B_dx));
    s.worst_half_mass = std::max({s.worst_half_mass, std::abs(c.meas_B - 0.5 * c.nu_sing),
                                  std::abs(c.meas_B_dx - 0.5 * c.nu_sing)});
  }
  return s;
}

}  // namespace hsalpha
