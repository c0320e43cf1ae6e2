#include "hsalpha/builtin.hpp"

#include <cmath>
#include <functional>
#include <memory>
#include <vector>

#include "hsalpha/errors.hpp"

namespace hsalpha::builtin {

namespace {

std::shared_ptr<const WaveProfile> pl(std::vector<double> xs, std::vector<double> vs) {
  return std::make_shared<PiecewiseLinearProfile>(PiecewiseLinearFn::through(xs, vs));
}

}  // namespace

InitialData ex41() {
  return InitialData::make(pl({0.0, 1.0, 2.0}, {3.0, 2.0, 0.0}), {{0.0, 1.0}}, std::nullopt, "ex41");
}

InitialData ex42() {
  const double c = -28.0 / 171.0;
  return InitialData::make(pl({0.0, 1.0, 400.0 / 361.0, 800.0 / 361.0, 200.0 / 81.0, 100.0 / 27.0},
                              {3.0, 2.0, 2.0, 18.0 / 19.0, 18.0 / 19.0, c}),
                           {}, std::nullopt, "ex42");
}

InitialData cusp() { return InitialData::make(std::make_shared<CuspProfile>(), {}, std::nullopt, "cusp"); }

AlphaFunction alpha1() {
  return AlphaFunction(
      [](double x) {
        if (x <= 0.0) return 0.0;
        if (x <= 11.0 / 4.0) return 3.0 / 11.0 * x;
        if (x <= 35.0 / 8.0) return 6.0 / 65.0 * x + 129.0 / 260.0;
        return 0.9;
      },
      3.0 / 11.0, "alpha1");
}

AlphaFunction alpha2() {
  const double k = 4.0 / 11.0 * std::log(7.0 / 4.0);
  return AlphaFunction(
      [k](double x) {
        if (x <= 0.0) return 0.0;
        if (x <= 11.0 / 4.0) return std::expm1(k * x);
        if (x <= 35.0 / 8.0) return 48.0 / 65.0 * x * x - 336.0 / 65.0 * x + 2439.0 / 260.0;
        return 0.9;
      },
      84.0 / 65.0, "alpha2");
}

AlphaFunction alpha_ex42() {
  return AlphaFunction(
      [](double x) {
        if (x <= 1434.0 / 361.0) return 0.0;
        if (x <= 6879.0 / 1444.0) return -478.0 / 127.0 + 361.0 / 381.0 * x;
        if (x <= 5.0) return (361.0 * x - 441.0) / 1705.0;
        return 0.8;
      },
      361.0 / 381.0, "ex42");
}

AlphaFunction alpha_cusp(double b) {
  if (!(b >= 0.0 && b <= 1.0)) throw ParameterError("cusp alpha: b must lie in [0, 1]");
  return AlphaFunction(
      [b](double x) {
        if (x < -1.0) return b;
        if (x < 0.0) return -b * x;
        return 0.0;
      },
      b, "cusp");
}

PiecewiseLinearFn cantor_table(int depth, double a, double b, double mass, double ratio) {
  if (depth < 0 || depth > 24) throw ParameterError("cantor_table: depth must lie in [0, 24]");
  if (!(b > a) || !(mass > 0.0) || !(ratio > 0.0 && ratio < 0.5))
    throw ParameterError("cantor_table: bad interval, mass or ratio");
  std::vector<std::pair<double, double>> pieces{{a, b}};
  for (int d = 0; d < depth; ++d) {
    std::vector<std::pair<double, double>> next;
    next.reserve(2 * pieces.size());
    for (auto [l, r] : pieces) {
      const double w = ratio * (r - l);
      next.emplace_back(l, l + w);
      next.emplace_back(r - w, r);
    }
    pieces.swap(next);
  }
  const double step = mass / static_cast<double>(pieces.size());
  std::vector<Breakpoint> bps;
  bps.reserve(2 * pieces.size());
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const double f0 = step * static_cast<double>(i);
    const double f1 = i + 1 == pieces.size() ? mass : step * static_cast<double>(i + 1);
    bps.push_back({pieces[i].first, f0, f0});
    bps.push_back({pieces[i].second, f1, f1});
  }
  return PiecewiseLinearFn(std::move(bps), 0.0, mass);
}

InitialData data_by_name(const std::string& name) {
  if (name == "ex41") return ex41();
  if (name == "ex42") return ex42();
  if (name == "cusp") return cusp();
  throw ParameterError("unknown builtin data '" + name + "'");
}

AlphaFunction alpha_by_name(const std::string& name) {
  if (name == "alpha1") return alpha1();
  if (name == "alpha2") return alpha2();
  if (name == "ex42") return alpha_ex42();
  if (name == "cusp") return alpha_cusp();
  throw ParameterError("unknown builtin alpha '" + name + "'");
}

}  // namespace hsalpha::builtin
