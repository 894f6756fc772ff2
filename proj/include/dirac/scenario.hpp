#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dirac/pathspace.hpp"
#include "dirac/residual.hpp"

namespace dirac {

inline constexpr const char* kSchemaVersion = "v1";
inline constexpr const char* kLibraryVersion = "1.0.0";

// Bad scenario input: malformed JSON, unknown fixture or check, invalid policy, bad expression.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(const std::string& message, std::string location = "")
      : std::runtime_error(location.empty() ? message : location + ": " + message),
        location_(std::move(location)) {}
  const std::string& location() const { return location_; }

 private:
  std::string location_;
};

struct NumericPolicy {
  std::uint64_t seed = 42;
  int samples = 64;
  double tol = 1e-8;
  std::vector<int> grid{32, 64, 128};
  std::optional<double> fd_step;  // unset: 1e-4 (1 + path amplitude)

  void validate() const;
};

nlohmann::json to_json(const NumericPolicy& p);

struct CheckResult {
  std::string name;
  bool pass = false;
  bool expected = true;
  double residual = 0.0;
  double threshold = 0.0;
  std::optional<Vec> worst_point;
  std::vector<RankDiagnostic> rank_diagnostics;
  std::optional<Convergence> convergence;
  std::string detail;

  bool ok() const { return pass == expected; }
  // pass ⇔ residual ≤ threshold and no indeterminate rank decision.
  void settle();
};

nlohmann::json to_json(const CheckResult& c);

struct CheckSpec {
  std::string name;
  std::string description;
  bool expected = true;
  std::function<CheckResult(const NumericPolicy&)> run;
};

struct Fixture {
  std::string name;
  std::string description;
  std::vector<CheckSpec> checks;

  const CheckSpec* find(const std::string& check) const;
};

struct Scenario {
  std::string id;
  Fixture fixture;
  std::vector<std::string> suite;  // empty: every check of the fixture
  NumericPolicy policy;
  std::map<std::string, bool> expect;
};

struct Report {
  std::string scenario;
  std::string fixture;
  NumericPolicy policy;
  std::vector<CheckResult> checks;  // sorted by name
  double wall_time_s = 0.0;

  bool ok() const;
};

nlohmann::json to_json(const Report& r);
nlohmann::json versions();

std::vector<std::string> builtin_fixture_names();
Fixture builtin_fixture(const std::string& name);
// Inline fixture: {"kind": "pair-groupoid" | "courant-graph" | "foliation", ...}.
Fixture inline_fixture(const nlohmann::json& j, const std::string& location = "fixture");

Scenario parse_scenario(const nlohmann::json& j);
Scenario builtin_scenario(const std::string& name, const NumericPolicy& policy = {});

Report run_scenario(const Scenario& s);

// Applies "check" or "fixture:check" keyed expectations.
void apply_expectations(Scenario& s, const nlohmann::json& expectations);

}  // namespace dirac
