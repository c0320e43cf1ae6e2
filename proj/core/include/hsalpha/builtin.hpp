#pragma once

#include <string>

#include "hsalpha/eulerian.hpp"

namespace hsalpha::builtin {

/// u = 3 left of 0, 3 - x on (0,1], 4 - 2x on (1,2], 0 beyond; unit atom at 0.
InitialData ex41();
/// Piecewise linear data with breaking times 2, 40/19 and 20/9.
InitialData ex42();
/// |x|^{2/3} on [-1, 1], no singular part.
InitialData cusp();

AlphaFunction alpha1();
AlphaFunction alpha2();
AlphaFunction alpha_ex42();
/// b on (-inf, -1), b|x| on [-1, 0), 0 on [0, inf).
AlphaFunction alpha_cusp(double b = 19.0 / 20.0);

/// Cumulative of a self-similar Cantor measure on [a, b] at finite depth.
/// Each level keeps two end pieces of relative length `ratio`; 1/3 is the
/// middle-thirds set. The table is linear on the 2^depth surviving pieces.
PiecewiseLinearFn cantor_table(int depth, double a = 0.0, double b = 1.0, double mass = 1.0,
                               double ratio = 1.0 / 3.0);

/// Names accepted by `data_by_name` and `alpha_by_name`.
InitialData data_by_name(const std::string& name);
AlphaFunction alpha_by_name(const std::string& name);

}  // namespace hsalpha::builtin
