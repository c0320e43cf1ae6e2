#include "hsalpha/piecewise_linear.hpp"

#include <algorithm>
#include <cmath>

#include "hsalpha/errors.hpp"

namespace hsalpha {

namespace {

bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a) + std::abs(b)); }

}  // namespace

PiecewiseLinearFn::PiecewiseLinearFn(std::vector<Breakpoint> breakpoints, double left_tail,
                                     double right_tail)
    : bps_(std::move(breakpoints)), left_tail_(left_tail), right_tail_(right_tail) {
  if (!std::isfinite(left_tail_) || !std::isfinite(right_tail_))
    throw StructuralError("non-finite tail value");
  for (std::size_t i = 0; i < bps_.size(); ++i) {
    const auto& b = bps_[i];
    if (!std::isfinite(b.x) || !std::isfinite(b.left) || !std::isfinite(b.right))
      throw StructuralError("non-finite breakpoint", static_cast<std::ptrdiff_t>(i));
    if (i > 0 && !(b.x > bps_[i - 1].x))
      throw StructuralError("breakpoints not strictly increasing", static_cast<std::ptrdiff_t>(i));
  }
  if (bps_.empty()) {
    if (!close(left_tail_, right_tail_))
      throw StructuralError("function without breakpoints must have equal tails");
    return;
  }
  if (!close(bps_.front().left, left_tail_))
    throw StructuralError("left tail disagrees with first breakpoint", 0);
  if (!close(bps_.back().right, right_tail_))
    throw StructuralError("right tail disagrees with last breakpoint",
                          static_cast<std::ptrdiff_t>(bps_.size() - 1));
}

PiecewiseLinearFn PiecewiseLinearFn::through(std::span<const double> xs, std::span<const double> vs) {
  if (xs.size() != vs.size() || xs.empty())
    throw StructuralError("through(): need matching non-empty arrays");
  std::vector<Breakpoint> b;
  b.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) b.push_back({xs[i], vs[i], vs[i]});
  return PiecewiseLinearFn(std::move(b), vs.front(), vs.back());
}

PiecewiseLinearFn PiecewiseLinearFn::constant(double c) { return PiecewiseLinearFn({}, c, c); }

double PiecewiseLinearFn::operator()(double x) const {
  auto it = std::lower_bound(bps_.begin(), bps_.end(), x,
                             [](const Breakpoint& b, double v) { return b.x < v; });
  if (it == bps_.end()) return right_tail_;
  if (it->x == x) return it->left;
  if (it == bps_.begin()) return left_tail_;
  const auto& a = *(it - 1);
  const double w = (x - a.x) / (it->x - a.x);
  return a.right + w * (it->left - a.right);
}

double PiecewiseLinearFn::right_limit(double x) const {
  auto it = std::upper_bound(bps_.begin(), bps_.end(), x,
                             [](double v, const Breakpoint& b) { return v < b.x; });
  if (it != bps_.begin() && (it - 1)->x == x) return (it - 1)->right;
  return (*this)(x);
}

double PiecewiseLinearFn::slope(double x) const {
  auto it = std::upper_bound(bps_.begin(), bps_.end(), x,
                             [](double v, const Breakpoint& b) { return v < b.x; });
  if (it == bps_.begin() || it == bps_.end()) return 0.0;
  const auto& a = *(it - 1);
  return (it->left - a.right) / (it->x - a.x);
}

std::vector<double> PiecewiseLinearFn::knots() const {
  std::vector<double> k;
  k.reserve(bps_.size());
  for (const auto& b : bps_) k.push_back(b.x);
  return k;
}

bool PiecewiseLinearFn::is_continuous(double tol) const {
  return std::all_of(bps_.begin(), bps_.end(),
                     [tol](const Breakpoint& b) { return std::abs(b.right - b.left) <= tol; });
}

bool PiecewiseLinearFn::is_nondecreasing(double tol) const {
  for (std::size_t i = 0; i < bps_.size(); ++i) {
    if (bps_[i].right < bps_[i].left - tol) return false;
    if (i + 1 < bps_.size() && bps_[i + 1].left < bps_[i].right - tol) return false;
  }
  return true;
}

double PiecewiseLinearFn::sup_abs() const {
  double m = std::max(std::abs(left_tail_), std::abs(right_tail_));
  for (const auto& b : bps_) m = std::max({m, std::abs(b.left), std::abs(b.right)});
  return m;
}

double PiecewiseLinearFn::total_jump() const {
  double s = 0.0;
  for (const auto& b : bps_) s += b.right - b.left;
  return s;
}

PiecewiseLinearFn PiecewiseLinearFn::operator+(const PiecewiseLinearFn& other) const {
  std::vector<double> xs = knots();
  auto ok = other.knots();
  std::vector<double> merged;
  merged.reserve(xs.size() + ok.size());
  std::merge(xs.begin(), xs.end(), ok.begin(), ok.end(), std::back_inserter(merged));
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
  std::vector<Breakpoint> b;
  b.reserve(merged.size());
  for (double x : merged)
    b.push_back({x, (*this)(x) + other(x), right_limit(x) + other.right_limit(x)});
  return PiecewiseLinearFn(std::move(b), left_tail_ + other.left_tail_,
                           right_tail_ + other.right_tail_);
}

PiecewiseLinearFn PiecewiseLinearFn::scaled(double a) const {
  auto b = bps_;
  for (auto& p : b) {
    p.left *= a;
    p.right *= a;
  }
  return PiecewiseLinearFn(std::move(b), a * left_tail_, a * right_tail_);
}

PiecewiseLinearFn identity_plus_inverse_shift(const PiecewiseLinearFn& g) {
  if (!g.is_nondecreasing(1e-14)) throw StructuralError("shift inverse needs nondecreasing g");
  std::vector<Breakpoint> out;
  out.reserve(2 * g.breakpoints().size());
  auto push = [&out](double r, double h) {
    if (!out.empty() && r <= out.back().x) {
      out.back().left = out.back().right = h;  // coincident after rounding
      return;
    }
    out.push_back({r, h, h});
  };
  for (const auto& b : g.breakpoints()) {
    push(b.x + b.left, b.left);
    if (b.right != b.left) push(b.x + b.right, b.right);
  }
  if (out.empty()) return PiecewiseLinearFn::constant(g.left_tail());
  return PiecewiseLinearFn(std::move(out), g.left_tail(), g.right_tail());
}

}  // namespace hsalpha
