#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hsalpha/piecewise_linear.hpp"

namespace hsalpha {

/// Initial wave profile u. Implementations are immutable and shared.
class WaveProfile {
 public:
  virtual ~WaveProfile() = default;

  virtual double value(double x) const = 0;
  /// Derivative where it exists; the right derivative at knots.
  virtual double slope(double x) const = 0;
  /// Integral of u_x^2 over (-inf, x].
  virtual double ac_energy(double x) const = 0;
  virtual double ac_total() const = 0;
  /// Points where u_x is discontinuous or unbounded.
  virtual std::vector<double> knots() const = 0;
  /// u is constant outside [first, second].
  virtual std::pair<double, double> window() const = 0;
  virtual double sup_abs() const = 0;

  /// Non-null when u is piecewise linear.
  virtual const PiecewiseLinearFn* piecewise_linear() const { return nullptr; }

  /// u(b) - u(a) and the ac energy of (a, b]. Overridden where plain
  /// differences cancel badly on short intervals.
  virtual std::pair<double, double> increments(double a, double b) const {
    return {value(b) - value(a), ac_energy(b) - ac_energy(a)};
  }
};

class PiecewiseLinearProfile final : public WaveProfile {
 public:
  /// `u` must be continuous.
  explicit PiecewiseLinearProfile(PiecewiseLinearFn u);

  double value(double x) const override { return u_(x); }
  double slope(double x) const override { return u_.slope(x); }
  double ac_energy(double x) const override { return energy_(x); }
  double ac_total() const override { return energy_.right_tail(); }
  std::vector<double> knots() const override { return u_.knots(); }
  std::pair<double, double> window() const override;
  double sup_abs() const override { return u_.sup_abs(); }
  const PiecewiseLinearFn* piecewise_linear() const override { return &u_; }

  const PiecewiseLinearFn& energy() const { return energy_; }

 private:
  PiecewiseLinearFn u_;
  PiecewiseLinearFn energy_;
};

/// u(x) = |x|^{2/3} on [-1, 1] and 1 outside.
class CuspProfile final : public WaveProfile {
 public:
  double value(double x) const override;
  double slope(double x) const override;
  double ac_energy(double x) const override;
  double ac_total() const override { return 8.0 / 3.0; }
  std::vector<double> knots() const override { return {-1.0, 0.0, 1.0}; }
  std::pair<double, double> window() const override { return {-1.0, 1.0}; }
  double sup_abs() const override { return 1.0; }
  std::pair<double, double> increments(double a, double b) const override;
};

struct Atom {
  double x;
  double mass;
};

/// Cumulative of the absolutely continuous part, F_ac(x) = mu_ac((-inf, x]).
struct AcCumulative {
  std::function<double(double)> eval;
  double total = 0.0;

  /// The density u_x^2 of the given profile.
  static AcCumulative of(std::shared_ptr<const WaveProfile> u);
  static AcCumulative tabulated(PiecewiseLinearFn f);
};

/// Finite positive Radon measure mu = mu_ac + mu_d + mu_sc.
class EnergyMeasure {
 public:
  EnergyMeasure() = default;
  EnergyMeasure(AcCumulative ac, std::vector<Atom> atoms,
                std::optional<PiecewiseLinearFn> sc_table = std::nullopt);

  double ac(double x) const { return ac_.eval ? ac_.eval(x) : 0.0; }
  /// mu_d((-inf, x)) and mu_d((-inf, x]).
  double discrete_left(double x) const;
  double discrete_right(double x) const;
  double sc(double x) const { return sc_ ? (*sc_)(x) : 0.0; }
  /// mu_sing((-inf, x)); continuous sc part plus atoms strictly left of x.
  double singular_left(double x) const { return discrete_left(x) + sc(x); }

  double ac_total() const { return ac_.total; }
  double singular_total() const;
  double total() const { return ac_total() + singular_total(); }

  std::span<const Atom> atoms() const { return atoms_; }
  const std::optional<PiecewiseLinearFn>& sc_table() const { return sc_; }
  const AcCumulative& ac_part() const { return ac_; }

 private:
  AcCumulative ac_;
  std::vector<Atom> atoms_;
  std::optional<PiecewiseLinearFn> sc_;
  std::vector<double> atom_prefix_;  // prefix_[i] = sum of masses of atoms_[0..i)
};

struct CumulativeValue {
  double left;   ///< F(x) = mu((-inf, x))
  double right;  ///< F(x+) = mu((-inf, x])
};

CumulativeValue cumulative(const EnergyMeasure& mu, double x);

/// An element of the solution space: (u, mu, nu) with mu = nu.
struct InitialData {
  std::shared_ptr<const WaveProfile> u;
  EnergyMeasure mu;
  double x_min = 0.0;
  double x_max = 0.0;
  std::string name;

  /// Left-continuous F and its right limit.
  double F(double x) const { return cumulative(mu, x).left; }
  double F_right(double x) const { return cumulative(mu, x).right; }
  double F_total() const { return mu.total(); }

  /// Builds an object whose window covers the profile window, atoms and sc table.
  static InitialData make(std::shared_ptr<const WaveProfile> u, std::vector<Atom> atoms = {},
                          std::optional<PiecewiseLinearFn> sc_table = std::nullopt,
                          std::string name = {});
};

/// Dissipation coefficient alpha: R -> [0, 1], Lipschitz.
class AlphaFunction {
 public:
  AlphaFunction() : AlphaFunction(constant(0.0)) {}
  AlphaFunction(std::function<double(double)> f, double lipschitz, std::string name = {});
  static AlphaFunction constant(double a);

  double operator()(double x) const { return f_(x); }
  double lipschitz() const { return lipschitz_; }
  bool is_constant() const { return lipschitz_ == 0.0; }
  const std::string& name() const { return name_; }

 private:
  std::function<double(double)> f_;
  double lipschitz_;
  std::string name_;
};

struct ValidationCheck {
  std::string name;
  bool passed;
  double worst;  ///< largest violation seen, 0 when none
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  double total_energy = 0.0;
  bool ok() const;
  const ValidationCheck* failed() const;
};

/// Checks monotonicity and left-continuity of F, F_ac against u_x^2 on every
/// segment, constant tails of u, and alpha's range and Lipschitz bound.
/// Structural problems are thrown, everything else is reported.
ValidationReport validate_initial_data(const InitialData& data, const AlphaFunction* alpha = nullptr,
                                       std::size_t samples = 4096);

/// f sampled at x0 + i * spacing; zero outside.
struct UniformSamples {
  double x0 = 0.0;
  double spacing = 1.0;
  std::vector<double> values;
};

UniformSamples sample_midpoints(const std::function<double(double)>& f, double a, double b,
                                std::size_t n);

/// Geometric grid 2 * 2^{-i/per_octave}, i = 0..n-1.
std::vector<double> geometric_h_grid(std::size_t n, int per_octave = 4, double h_max = 2.0);

/// max over h of h^{-beta} ||f(. + h) - f||_2 with shifts rounded to whole samples.
double besov_seminorm_estimate(const UniformSamples& f, double beta, std::span<const double> h_grid);

}  // namespace hsalpha
