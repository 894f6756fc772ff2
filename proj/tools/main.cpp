#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "dirac/scenario.hpp"

using dirac::NumericPolicy;
using dirac::ScenarioError;
using json = nlohmann::json;

namespace {

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open file", path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("malformed JSON: ") + e.what(), path + ": byte " + std::to_string(e.byte));
  }
}

bool looks_like_file(const std::string& target) {
  return target.find('/') != std::string::npos || target.find(".json") != std::string::npos;
}

struct RunOptions {
  std::string target;
  bool all = false;
  std::uint64_t seed = 42;
  int samples = 64;
  double tol = 1e-8;
  std::vector<int> grid{32, 64, 128};
  double fd_step = 0.0;
  std::string out;
  std::string expect_file;
};

void override_policy(NumericPolicy& p, const RunOptions& o, const CLI::App& run) {
  if (run.count("--seed")) p.seed = o.seed;
  if (run.count("--samples")) p.samples = o.samples;
  if (run.count("--tol")) p.tol = o.tol;
  if (run.count("--grid")) p.grid = o.grid;
  if (run.count("--fd-step")) p.fd_step = o.fd_step;
  p.validate();
}

int emit(const json& j, const std::string& out) {
  std::string text = j.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out);
    if (!f) {
      std::cerr << "error: cannot write " << out << "\n";
      return 2;
    }
    f << text;
  }
  return 0;
}

int do_run(const RunOptions& o, const CLI::App& run) {
  std::optional<json> expectations;
  if (!o.expect_file.empty()) expectations = read_json(o.expect_file);

  if (o.all) {
    auto start = std::chrono::steady_clock::now();
    json reports = json::array();
    bool ok = true;
    for (const auto& name : dirac::builtin_fixture_names()) {
      NumericPolicy p;
      override_policy(p, o, run);
      dirac::Scenario s = dirac::builtin_scenario(name, p);
      if (expectations) dirac::apply_expectations(s, *expectations);
      dirac::Report r = dirac::run_scenario(s);
      ok = ok && r.ok();
      reports.push_back(dirac::to_json(r));
    }
    json j{{"schema", dirac::kSchemaVersion},
           {"reports", reports},
           {"ok", ok},
           {"wall_time_s", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()}};
    int rc = emit(j, o.out);
    return rc ? rc : (ok ? 0 : 1);
  }

  dirac::Scenario s;
  if (looks_like_file(o.target)) {
    s = dirac::parse_scenario(read_json(o.target));
  } else {
    s = dirac::builtin_scenario(o.target);
  }
  override_policy(s.policy, o, run);
  if (expectations) dirac::apply_expectations(s, *expectations);
  dirac::Report r = dirac::run_scenario(s);
  int rc = emit(dirac::to_json(r), o.out);
  return rc ? rc : (r.ok() ? 0 : 1);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for twisted Dirac geometry"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(dirac::kLibraryVersion));

  RunOptions o;
  auto* run = app.add_subcommand("run", "Run a scenario file, a builtin fixture, or every builtin fixture");
  run->add_option("target", o.target, "scenario JSON file or builtin fixture name");
  run->add_flag("--all", o.all, "run every builtin fixture");
  run->add_option("--seed", o.seed, "sampling seed (default 42)");
  run->add_option("--samples", o.samples, "sample count (default 64)");
  run->add_option("--tol", o.tol, "residual threshold for groupoid identities (default 1e-8)");
  run->add_option("--grid", o.grid, "grid sizes for convergence studies (default 32 64 128)")->expected(2, 16);
  run->add_option("--fd-step", o.fd_step, "finite-difference step (default: scaled to the path)");
  run->add_option("--out", o.out, "write the report here instead of stdout");
  run->add_option("--expect-file", o.expect_file, "JSON object of check (or fixture:check) to expected pass");

  auto* list_fixtures = app.add_subcommand("list-fixtures", "List builtin fixtures");
  std::string fixture_name;
  auto* list_checks = app.add_subcommand("list-checks", "List checks of one or all builtin fixtures");
  list_checks->add_option("fixture", fixture_name, "builtin fixture name");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*list_fixtures) {
      for (const auto& name : dirac::builtin_fixture_names())
        std::cout << name << "\t" << dirac::builtin_fixture(name).description << "\n";
      return 0;
    }
    if (*list_checks) {
      std::vector<std::string> names =
          fixture_name.empty() ? dirac::builtin_fixture_names() : std::vector<std::string>{fixture_name};
      for (const auto& name : names) {
        dirac::Fixture f = dirac::builtin_fixture(name);
        std::vector<const dirac::CheckSpec*> checks;
        for (const auto& c : f.checks) checks.push_back(&c);
        std::sort(checks.begin(), checks.end(), [](auto* a, auto* b) { return a->name < b->name; });
        for (const auto* c : checks)
          std::cout << name << "\t" << c->name << (c->expected ? "" : "\t[expected fail]") << "\t" << c->description
                    << "\n";
      }
      return 0;
    }
    if (o.all == !o.target.empty()) {
      std::cerr << "error: run needs exactly one of a target or --all\n";
      return 2;
    }
    return do_run(o, *run);
  } catch (const ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
