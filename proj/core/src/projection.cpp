#include "hsalpha/projection.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "hsalpha/errors.hpp"

namespace hsalpha {

ProjectedData::ProjectedData(double dx, long j_first, std::vector<DoubleCell> cells, double u_end,
                             double f_ac_end, double f_sing_start)
    : dx_(dx),
      j_first_(j_first),
      cells_(std::move(cells)),
      u_end_(u_end),
      f_ac_end_(f_ac_end),
      f_sing_start_(f_sing_start) {
  if (!(dx_ > 0.0)) throw ParameterError("dx must be positive");
  if (j_first_ % 2 != 0) throw StructuralError("first mesh index must be even");
  if (cells_.empty()) throw StructuralError("projection without cells");
}

double ProjectedData::F_total() const { return f_ac_end_ + cells_.back().f_sing; }

long ProjectedData::cell_of(double xv) const {
  const long n = static_cast<long>(cells_.size());
  if (xv < x_left()) return -1;
  if (xv >= x_right()) return n;
  long c = static_cast<long>(std::floor((xv - x_left()) / (2.0 * dx_)));
  c = std::clamp(c, 0L, n - 1);
  while (c > 0 && xv < x(j_first_ + 2 * c)) --c;
  while (c + 1 < n && xv >= x(j_first_ + 2 * c + 2)) ++c;
  return c;
}

double ProjectedData::u(double xv) const {
  const long c = cell_of(xv);
  if (c < 0) return cells_.front().u0;
  if (c >= static_cast<long>(cells_.size())) return u_end_;
  const auto& cl = cells_[static_cast<std::size_t>(c)];
  const long j = j_first_ + 2 * c;
  const double x0 = x(j), x1 = x(j + 1);
  if (xv <= x1) return cl.u0 + cl.slope_first() * (xv - x0);
  return cl.u0 + cl.slope_first() * dx_ + cl.slope_second() * (xv - x1);
}

double ProjectedData::F_ac(double xv) const {
  const long c = cell_of(xv);
  if (c < 0) return cells_.front().f_ac0;
  const auto n = static_cast<long>(cells_.size());
  if (c >= n) return f_ac_end_;
  const auto& cl = cells_[static_cast<std::size_t>(c)];
  const long j = j_first_ + 2 * c;
  const double x0 = x(j), x1 = x(j + 1);
  if (xv <= x1) {
    const double s = cl.slope_first();
    return cl.f_ac0 + s * s * (xv - x0);
  }
  const double f2 = c + 1 < n ? cells_[static_cast<std::size_t>(c + 1)].f_ac0 : f_ac_end_;
  const double s = cl.slope_second();
  return 0.5 * (f2 + cl.f_ac0) + 2.0 * cl.sign * cl.du * cl.q * dx_ + s * s * (xv - x1);
}

double ProjectedData::F(double xv) const {
  const long c = cell_of(xv);
  const auto n = static_cast<long>(cells_.size());
  if (c < 0) return cells_.front().f_ac0 + f_sing_start_;
  if (c >= n) {
    // x_right itself is still governed by the last cell (left-continuity)
    return f_ac_end_ + cells_.back().f_sing;
  }
  const auto& cl = cells_[static_cast<std::size_t>(c)];
  if (xv == x(j_first_ + 2 * c)) {
    const double prev = c == 0 ? f_sing_start_ : cells_[static_cast<std::size_t>(c - 1)].f_sing;
    return cl.f_ac0 + prev;
  }
  return F_ac(xv) + cl.f_sing;
}

double ProjectedData::F_right(double xv) const {
  const long c = cell_of(xv);
  if (c >= 0 && c < static_cast<long>(cells_.size()) && xv == x(j_first_ + 2 * c))
    return cells_[static_cast<std::size_t>(c)].f_ac0 + cells_[static_cast<std::size_t>(c)].f_sing;
  return F(xv);
}

PiecewiseLinearFn ProjectedData::u_fn() const {
  std::vector<double> xs, vs;
  xs.reserve(2 * cells_.size() + 1);
  vs.reserve(2 * cells_.size() + 1);
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    const long j = j_first_ + 2 * static_cast<long>(c);
    const auto& cl = cells_[c];
    xs.push_back(x(j));
    vs.push_back(cl.u0);
    xs.push_back(x(j + 1));
    vs.push_back(cl.u0 + cl.slope_first() * dx_);
  }
  xs.push_back(x_right());
  vs.push_back(u_end_);
  return PiecewiseLinearFn::through(xs, vs);
}

PiecewiseLinearFn ProjectedData::F_ac_fn() const {
  std::vector<double> xs, vs;
  xs.reserve(2 * cells_.size() + 1);
  vs.reserve(2 * cells_.size() + 1);
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    const long j = j_first_ + 2 * static_cast<long>(c);
    const auto& cl = cells_[c];
    const double s = cl.slope_first();
    xs.push_back(x(j));
    vs.push_back(cl.f_ac0);
    xs.push_back(x(j + 1));
    vs.push_back(cl.f_ac0 + s * s * dx_);
  }
  xs.push_back(x_right());
  vs.push_back(f_ac_end_);
  return PiecewiseLinearFn::through(xs, vs);
}

PiecewiseLinearFn ProjectedData::F_fn() const {
  std::vector<Breakpoint> b;
  b.reserve(2 * cells_.size() + 1);
  double prev_sing = f_sing_start_;
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    const long j = j_first_ + 2 * static_cast<long>(c);
    const auto& cl = cells_[c];
    const double s = cl.slope_first();
    b.push_back({x(j), cl.f_ac0 + prev_sing, cl.f_ac0 + cl.f_sing});
    const double mid = cl.f_ac0 + s * s * dx_ + cl.f_sing;
    b.push_back({x(j + 1), mid, mid});
    prev_sing = cl.f_sing;
  }
  const double end = f_ac_end_ + prev_sing;
  b.push_back({x_right(), end, end});
  const double left = b.front().left;
  return PiecewiseLinearFn(std::move(b), left, end);
}

int sign_select(double u_left, double u_mid, double u_right, double q, double dx) {
  const double du = (u_right - u_left) / (2.0 * dx);
  const double plus = u_left + (du + q) * dx;
  const double minus = u_left + (du - q) * dx;
  return std::abs(u_mid - plus) <= std::abs(u_mid - minus) ? 1 : -1;
}

namespace {

// (1/(b-a)) * integral over [a, b] of (u_x - m)^2 and of u_x^2; `k`
// advances through knots.
std::pair<double, double> slope_moments(const PiecewiseLinearFn& u, const std::vector<double>& knots,
                                        std::size_t& k, double a, double b, double m) {
  while (k < knots.size() && knots[k] <= a) ++k;
  double var = 0.0, sq = 0.0, l = a;
  for (std::size_t i = k; l < b; ++i) {
    const double r = i < knots.size() ? std::min(knots[i], b) : b;
    const double s = u.slope(l), d = s - m;
    var += d * d * (r - l);
    sq += s * s * (r - l);
    l = r;
  }
  return {var / (b - a), sq / (b - a)};
}

}  // namespace

ProjectedData project(const InitialData& data, double dx) {
  if (!(dx > 0.0) || !std::isfinite(dx)) throw ParameterError("dx must be positive and finite");
  if (!data.u) throw StructuralError("initial data has no wave profile");
  const double width = data.x_max - data.x_min;
  if (width / dx > 2e8) throw ParameterError("dx too small for the support window");

  const long j_first = 2 * static_cast<long>(std::floor(data.x_min / (2.0 * dx))) - 2;
  const long j_last = 2 * static_cast<long>(std::ceil(data.x_max / (2.0 * dx))) + 2;
  const auto n = static_cast<std::size_t>((j_last - j_first) / 2);
  const auto xj = [dx](long j) { return static_cast<double>(j) * dx; };

  const PiecewiseLinearFn* pl = data.u->piecewise_linear();
  const std::vector<double> knots = pl ? pl->knots() : std::vector<double>{};
  std::size_t kp = 0;

  std::vector<DoubleCell> cells(n);
  double u0 = data.u->value(xj(j_first));
  double f0 = data.mu.ac(xj(j_first));
  for (std::size_t c = 0; c < n; ++c) {
    const long j = j_first + 2 * static_cast<long>(c);
    const double um = data.u->value(xj(j + 1));
    const double u2 = data.u->value(xj(j + 2));
    const double f2 = data.mu.ac(xj(j + 2));
    double du, dF;
    if (pl) {
      du = (u2 - u0) / (2.0 * dx);
      dF = (f2 - f0) / (2.0 * dx);
    } else {
      const auto [iu, iF] = data.u->increments(xj(j), xj(j + 2));
      du = iu / (2.0 * dx);
      dF = iF / (2.0 * dx);
    }
    // on piecewise linear data the radicand is the variance of u_x over the
    // cell; summing it directly avoids the cancellation in dF - du^2. A
    // measure whose ac part disagrees with u_x^2 beyond roundoff shifts it.
    double rad = dF - du * du;
    if (pl) {
      const auto [var, sq] = slope_moments(*pl, knots, kp, xj(j), xj(j + 2), du);
      const double off = dF - sq;
      rad = var;
      if (std::abs(off) * 2.0 * dx > 1e-12 * std::max(1.0, std::abs(f0) + std::abs(f2))) rad += off;
    }
    if (rad < -1e-12 * std::max(1.0, dF))
      throw InconsistentInputError("negative radicand: F_ac increment below u increment squared",
                                   static_cast<std::ptrdiff_t>(c));
    const double q = std::sqrt(std::max(rad, 0.0));
    auto& cl = cells[c];
    cl.u0 = u0;
    cl.du = du;
    cl.q = q;
    cl.sign = sign_select(u0, um, u2, q, dx);
    cl.f_ac0 = f0;
    cl.f_sing = data.mu.singular_left(xj(j + 2));
    u0 = u2;
    f0 = f2;
  }
  return ProjectedData(dx, j_first, std::move(cells), u0, f0, data.mu.singular_left(xj(j_first)));
}

bool ProjectionErrorReport::within_bounds() const {
  return u_sup <= u_sup_bound && u_l2 <= u_l2_bound && F_l1 <= F_l1_bound && F_l2 <= F_l2_bound;
}

namespace {

constexpr std::array<double, 4> kGx = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                       0.8611363115940526};
constexpr std::array<double, 4> kGw = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                       0.3478548451374538};

}  // namespace

ProjectionErrorReport projection_error_report(const InitialData& data, const ProjectedData& proj,
                                              int refine) {
  if (refine < 1) refine = 1;
  const double dx = proj.dx();
  std::vector<double> pts;
  const long nh = 2 * static_cast<long>(proj.cell_count());
  pts.reserve(static_cast<std::size_t>(nh * refine) + 16);
  for (long h = 0; h < nh; ++h)
    for (int i = 0; i < refine; ++i)
      pts.push_back(proj.x(proj.j_first() + h) + dx * static_cast<double>(i) / refine);
  pts.push_back(proj.x_right());
  for (double k : data.u->knots())
    if (k > proj.x_left() && k < proj.x_right()) pts.push_back(k);
  for (const auto& a : data.mu.atoms()) pts.push_back(a.x);
  if (data.mu.sc_table())
    for (double k : data.mu.sc_table()->knots()) pts.push_back(k);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  ProjectionErrorReport r{};
  r.dx = dx;
  double u2 = 0.0, f1 = 0.0, f2 = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    r.u_sup = std::max(r.u_sup, std::abs(data.u->value(pts[i]) - proj.u(pts[i])));
    if (i + 1 == pts.size()) break;
    const double a = pts[i], b = pts[i + 1];
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (std::size_t g = 0; g < kGx.size(); ++g) {
      const double x = c + h * kGx[g];
      const double du = data.u->value(x) - proj.u(x);
      const double dF = std::abs(data.F(x) - proj.F(x));
      u2 += kGw[g] * h * du * du;
      f1 += kGw[g] * h * dF;
      f2 += kGw[g] * h * dF * dF;
    }
  }
  r.u_l2 = std::sqrt(u2);
  r.F_l1 = f1;
  r.F_l2 = std::sqrt(f2);
  const double fac = std::sqrt(data.mu.ac_total());
  const double ftot = data.F_total();
  constexpr double s2 = 1.4142135623730951;
  r.u_sup_bound = (1.0 + s2) * fac * std::sqrt(dx);
  r.u_l2_bound = s2 * (1.0 + s2) * fac * dx;
  r.F_l1_bound = 2.0 * ftot * dx;
  r.F_l2_bound = 2.0 * ftot * std::sqrt(dx);
  return r;
}

}  // namespace hsalpha
