#include <gtest/gtest.h>

#include <json.hpp>

#include "hsalpha/builtin.hpp"
#include "hsalpha/errors.hpp"
#include "hsalpha/io.hpp"
#include "hsalpha/projection.hpp"

using namespace hsalpha;
using json = nlohmann::json;

TEST(DataJson, BreakpointsAtomsAndTable) {
  const auto d = initial_data_from_json(R"({
    "u": {"breakpoints": [[0, 3], [1, 2], [2, 0]], "left": 3, "right": 0},
    "atoms": [[0, 1]],
    "sc_table": [[5, 0], [6, 0.5]]})");
  EXPECT_DOUBLE_EQ(d.u->value(0.5), 2.5);
  EXPECT_DOUBLE_EQ(d.F_right(0.0), 1.0);
  EXPECT_NEAR(d.F_total(), 6.5, 1e-14);
  EXPECT_NEAR(d.mu.singular_total(), 1.5, 1e-15);
}

TEST(DataJson, BuiltinsAndOverrides) {
  EXPECT_NEAR(initial_data_from_json(R"({"u": {"builtin": "ex41"}})").F_total(), 6.0, 1e-14);
  const auto d = initial_data_from_json(R"({"u": {"builtin": "ex41"}, "atoms": []})");
  EXPECT_NEAR(d.F_total(), 5.0, 1e-14);
  EXPECT_NEAR(initial_data_from_json(R"({"u": {"builtin": "cusp"}})").F_total(), 8.0 / 3.0, 1e-14);
}

TEST(DataJson, Malformed) {
  EXPECT_THROW(initial_data_from_json("{"), ParameterError);
  EXPECT_THROW(initial_data_from_json(R"({"atoms": []})"), ParameterError);
  EXPECT_THROW(initial_data_from_json(R"({"u": {"breakpoints": [[1, 0], [0, 1]]}})"), StructuralError);
  EXPECT_THROW(initial_data_from_json(R"({"u": {"breakpoints": [[0, "a"]]}})"), ParameterError);
  EXPECT_THROW(initial_data_from_json(R"({"u": {"builtin": "nope"}})"), ParameterError);
}

TEST(AlphaJson, AllForms) {
  EXPECT_DOUBLE_EQ(alpha_from_json(R"({"builtin": "alpha1"})")(1.0), 3.0 / 11.0);
  EXPECT_DOUBLE_EQ(alpha_from_json(R"({"const": 0.25})")(7.0), 0.25);
  EXPECT_DOUBLE_EQ(alpha_from_json(R"({"builtin": "cusp", "b": 0.5})")(-2.0), 0.5);
  const auto a = alpha_from_json(R"({"breakpoints": [[0, 0], [2, 1]], "lipschitz": 0.5})");
  EXPECT_DOUBLE_EQ(a(1.0), 0.5);
  EXPECT_DOUBLE_EQ(a.lipschitz(), 0.5);
  EXPECT_THROW(alpha_from_json(R"({"const": 2})"), ParameterError);
  EXPECT_THROW(alpha_from_json(R"({"breakpoints": [[0, 0], [1, 1]], "lipschitz": 0.5})"), ParameterError);
}

TEST(Dumps, LagrangianJsonFields) {
  const auto g = to_lagrangian_grid(project(builtin::ex41(), 0.25));
  const auto j = json::parse(lagrangian_json(g));
  for (const char* k : {"xi", "y", "U", "V", "H", "tau"}) ASSERT_TRUE(j.contains(k)) << k;
  EXPECT_EQ(j["xi"].size(), g.nodes());
  EXPECT_EQ(j["tau"].size(), g.cells());
  bool has_null = false;
  for (const auto& t : j["tau"]) has_null |= t.is_null();
  EXPECT_TRUE(has_null);
}

TEST(Dumps, ProjectedRoundNumbers) {
  const auto j = json::parse(projected_json(project(builtin::cusp(), 0.5)));
  EXPECT_DOUBLE_EQ(j["dx"].get<double>(), 0.5);
  EXPECT_FALSE(j["cells"].empty());
}

TEST(Dumps, SolutionCsvHeader) {
  const auto e = to_eulerian(to_lagrangian_grid(project(builtin::ex41(), 0.5)));
  const auto csv = solution_csv(e);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "x,u,F");
}
