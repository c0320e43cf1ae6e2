#pragma once

#include <span>
#include <vector>

namespace hsalpha {

/// One breakpoint. `left` and `right` differ only where the function jumps.
struct Breakpoint {
  double x;
  double left;
  double right;
};

/// Piecewise linear function of one variable with constant tails.
///
/// Between consecutive breakpoints the graph is the straight segment from
/// `right` of the first to `left` of the second. `operator()` is
/// left-continuous, so at a jump it returns `left`. The left tail must agree
/// with the first `left` value and the right tail with the last `right`.
class PiecewiseLinearFn {
 public:
  PiecewiseLinearFn() = default;
  PiecewiseLinearFn(std::vector<Breakpoint> breakpoints, double left_tail, double right_tail);

  /// Continuous function through (xs[i], vs[i]); tails are the end values.
  static PiecewiseLinearFn through(std::span<const double> xs, std::span<const double> vs);
  static PiecewiseLinearFn constant(double c);

  double operator()(double x) const;
  double right_limit(double x) const;
  /// Slope of the piece to the right of x (zero in the tails).
  double slope(double x) const;

  std::span<const Breakpoint> breakpoints() const { return bps_; }
  std::vector<double> knots() const;
  double left_tail() const { return left_tail_; }
  double right_tail() const { return right_tail_; }
  bool empty() const { return bps_.empty(); }

  bool is_continuous(double tol = 0.0) const;
  bool is_nondecreasing(double tol = 0.0) const;
  double sup_abs() const;
  /// Sum of jump sizes, right minus left.
  double total_jump() const;

  PiecewiseLinearFn operator+(const PiecewiseLinearFn& other) const;
  PiecewiseLinearFn scaled(double a) const;

 private:
  std::vector<Breakpoint> bps_;
  double left_tail_ = 0.0;
  double right_tail_ = 0.0;
};

/// For a nondecreasing g, returns h with y(r) = r - h(r), where
/// y(r) = sup{x : x + g(x) < r}. Jumps of g become slope-one pieces of h.
PiecewiseLinearFn identity_plus_inverse_shift(const PiecewiseLinearFn& g);

}  // namespace hsalpha
