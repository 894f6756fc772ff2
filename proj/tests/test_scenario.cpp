#include "support.hpp"

#include "dirac/scenario.hpp"

using namespace dirac;
using json = nlohmann::json;

namespace {

json strip_timing(json j) {
  if (j.is_object()) {
    j.erase("wall_time_s");
    for (auto& [k, v] : j.items()) v = strip_timing(v);
  } else if (j.is_array()) {
    for (auto& v : j) v = strip_timing(v);
  }
  return j;
}

}  // namespace

TEST_SUITE("scenario") {
  TEST_CASE("fixture listing is sorted and complete") {
    auto names = builtin_fixture_names();
    CHECK(std::is_sorted(names.begin(), names.end()));
    CHECK(std::find(names.begin(), names.end(), "amm-so3") != names.end());
    CHECK(std::find(names.begin(), names.end(), "pair-groupoid-r2") != names.end());
    CHECK_THROWS_AS(builtin_fixture("nope"), ScenarioError);
  }

  TEST_CASE("pass rule") {
    CheckResult r;
    r.residual = 1e-9;
    r.threshold = 1e-8;
    r.settle();
    CHECK(r.pass);
    r.rank_diagnostics.push_back({"x", RankInfo{1, 1.0, 1e-9, 1.0, 0.0, true}});
    r.settle();
    CHECK_FALSE(r.pass);
    r.rank_diagnostics.clear();
    r.residual = std::numeric_limits<double>::quiet_NaN();
    r.settle();
    CHECK_FALSE(r.pass);
  }

  TEST_CASE("expected failure semantics") {
    json j = {{"fixture", "nondirac-flow"}, {"suite", {"dirac_type"}}, {"expect", {{"dirac_type", false}}}};
    Report r = run_scenario(parse_scenario(j));
    REQUIRE(r.checks.size() == 1);
    CHECK_FALSE(r.checks[0].pass);
    CHECK(r.ok());
  }

  TEST_CASE("scenario errors carry locations") {
    auto location = [](const json& j) {
      try {
        parse_scenario(j);
      } catch (const ScenarioError& e) {
        return e.location();
      }
      return std::string("none");
    };
    CHECK(location({{"fixture", "amm-so3"}, {"suite", {"nope"}}}) == "suite[0]");
    CHECK(location({{"fixture", "amm-so3"}, {"policy", {{"samples", 0}}}}) == "policy.samples");
    CHECK(location({{"fixture", {{"kind", "pair-groupoid"}, {"n", 2}, {"omega", {{"12", "1 + * x1"}}}}}}) ==
          "fixture.omega.12");
    CHECK(location({{"fixture", {{"kind", "pair-groupoid"}, {"n", 2}, {"omega", {{"12", "y"}}}}}}) ==
          "fixture.omega.12");
    CHECK(location({{"fixture", {{"kind", "teapot"}}}}) == "fixture.kind");
    CHECK(location({{"fixture", "amm-so3"}, {"expect", {{"nope", true}}}}) == "expect.nope");
  }

  TEST_CASE("inline courant fixture detects a wrong twist") {
    json j = {{"fixture",
               {{"kind", "courant-graph"},
                {"n", 3},
                {"omega", {{"12", "x3"}, {"13", "x1*x2"}}},
                {"phi", {{"123", "0.5"}}}}},
              {"expect", {{"graph_integrability", false}, {"closedness_defect", false}}}};
    Report r = run_scenario(parse_scenario(j));
    CHECK(r.ok());
    for (const auto& c : r.checks) CHECK(c.residual >= 0.1);
  }

  TEST_CASE("reports are deterministic") {
    NumericPolicy p;
    p.samples = 16;
    json a = strip_timing(to_json(run_scenario(builtin_scenario("pair-groupoid-r2", p))));
    json b = strip_timing(to_json(run_scenario(builtin_scenario("pair-groupoid-r2", p))));
    CHECK(a.dump() == b.dump());
    CHECK(a["schema"] == "v1");
  }

  TEST_CASE("policy flows into checks") {
    NumericPolicy p;
    p.grid = {16, 32};
    Scenario s = builtin_scenario("pathspace-pair", p);
    s.suite = {"basicness_convergence"};
    Report r = run_scenario(s);
    REQUIRE(r.checks.size() == 1);
    REQUIRE(r.checks[0].convergence.has_value());
    CHECK(r.checks[0].convergence->grids == std::vector<int>{16, 32});
  }
}
