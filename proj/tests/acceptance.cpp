#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "dirac/scenario.hpp"

using namespace dirac;
using json = nlohmann::json;

namespace {

struct Line {
  bool pass = true;
  std::string notes;
};

// A check of a builtin fixture, required to be ok() and to use the pinned threshold.
void require(Line& line, const Report& rep, const std::string& check, std::optional<double> threshold = std::nullopt) {
  for (const auto& c : rep.checks) {
    if (c.name != check) continue;
    bool good = c.ok() && (!threshold || c.threshold == *threshold);
    char buf[256];
    std::snprintf(buf, sizeof buf, " %s:%s=%.3g/%.3g%s", rep.fixture.c_str(), check.c_str(), c.residual, c.threshold,
                  good ? "" : "(!)");
    line.notes += buf;
    line.pass = line.pass && good;
    return;
  }
  line.notes += " " + rep.fixture + ":" + check + "=missing";
  line.pass = false;
}

void require_all(Line& line, const Report& rep) {
  int bad = 0;
  for (const auto& c : rep.checks) bad += c.ok() ? 0 : 1;
  line.notes += " " + rep.fixture + ":" + std::to_string(rep.checks.size() - bad) + "/" +
                std::to_string(rep.checks.size()) + "ok";
  line.pass = line.pass && bad == 0;
}

Report run(const std::string& fixture, std::vector<std::string> suite = {}) {
  NumericPolicy p;
  p.seed = 42;
  p.samples = 64;
  p.tol = 1e-8;
  p.grid = {32, 64, 128};
  Scenario s = builtin_scenario(fixture, p);
  s.suite = std::move(suite);
  return run_scenario(s);
}

json strip_timing(json j) {
  if (j.is_object()) {
    j.erase("wall_time_s");
    for (auto& [k, v] : j.items()) v = strip_timing(v);
  } else if (j.is_array()) {
    for (auto& v : j) v = strip_timing(v);
  }
  return j;
}

json full_suite() {
  json all = json::array();
  for (const auto& name : builtin_fixture_names()) all.push_back(strip_timing(to_json(run(name))));
  return all;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    double budget_s;
    std::function<Line()> body;
  };
  const std::vector<Criterion> criteria = {
      {1, "linear Dirac suite", 5.0,
       [] {
         Line l;
         Report r = run("linear-suite");
         require(l, r, "isotropy_maximality", 1e-9);
         require(l, r, "form_roundtrip", 1e-12);
         require(l, r, "push_forward_isotropy", 1e-9);
         require_all(l, r);
         return l;
       }},
      {2, "Courant graph characterization", 10.0,
       [] {
         Line l;
         Report r = run("courant-graph", {"graph_positive", "graph_negative"});
         require(l, r, "graph_positive", 1e-9);
         require(l, r, "graph_negative", 1e-3);
         return l;
       }},
      {3, "groupoid identity suite", 60.0,
       [] {
         Line l;
         for (const char* f : {"pair-groupoid-r2", "twisted-pair-r3", "nondirac-flow", "foliation-groupoid", "amm-so3",
                               "amm-su2", "coadjoint-so3"}) {
           Report r = run(f);
           for (const char* c : {"multiplicative", "rel_closed", "unit_pullback", "inverse_pullback",
                                 "kernel_orthogonality", "unit_identities"}) {
             bool good = false;
             for (const auto& x : r.checks) good = good || (x.name == c && x.ok() && x.threshold == 1e-8);
             l.pass = l.pass && good;
           }
           require_all(l, r);
         }
         Report flow = run("nondirac-flow", {"dirac_type", "dirac_type_witness"});
         require(l, flow, "dirac_type");
         require(l, flow, "dirac_type_witness", 1e-2);
         return l;
       }},
      {4, "AMM and Cartan-Dirac coherence", 0.0,
       [] {
         Line l;
         for (const char* f : {"amm-so3", "amm-su2"}) {
           Report r = run(f, {"rho_star_match", "induced_cartan_dirac", "cartan_integrability"});
           require(l, r, "rho_star_match", 1e-9);
           require(l, r, "induced_cartan_dirac", 1e-8);
           require(l, r, "cartan_integrability", 1e-8);
         }
         return l;
       }},
      {5, "quasi-hamiltonian equivalence", 0.0,
       [] {
         Line l;
         Report r = run("qham-r2-u1");
         for (const char* c : {"qham_closedness", "qham_moment", "qham_kernel", "qham_invariance", "qham_equivariance",
                               "crosscheck_generators"})
           require(l, r, c, 1e-8);
         require(l, r, "perturbed_moment", 0.1);
         return l;
       }},
      {6, "path-space reconstruction", 120.0,
       [] {
         Line l;
         Report r = run("pathspace-pair", {"basicness", "basicness_convergence", "omega_phi_identity",
                                           "boundary_identity"});
         require(l, r, "basicness", 5e-4);
         require(l, r, "basicness_convergence", 0.0);
         require(l, r, "omega_phi_identity", 1e-10);
         require(l, r, "boundary_identity", 1e-6);
         return l;
       }},
      {7, "foliation suite", 0.0,
       [] {
         Line l;
         Report r = run("foliation-classes", {"dF_squared", "d_nu_closed", "u_sigma_vs_d_nu", "twisted_shift"});
         require(l, r, "dF_squared", 1e-12);
         require(l, r, "d_nu_closed", 1e-10);
         require(l, r, "u_sigma_vs_d_nu", 1e-9);
         require(l, r, "twisted_shift", 1e-9);
         Report g = run("foliation-groupoid", {"presymplectic", "induced_foliation_dirac"});
         require(l, g, "presymplectic");
         require(l, g, "induced_foliation_dirac", 1e-8);
         return l;
       }},
      {8, "determinism of the full suite", 0.0,
       [] {
         Line l;
         json a = full_suite();
         json b = full_suite();
         l.pass = a.dump() == b.dump();
         l.notes = " " + std::to_string(a.size()) + " reports, " + std::to_string(a.dump().size()) + " bytes" +
                   (l.pass ? ", identical" : ", differ");
         return l;
       }},
  };

  bool all = true;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Line l;
    try {
      l = c.body();
    } catch (const std::exception& e) {
      l.pass = false;
      l.notes = std::string(" error: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool in_time = c.budget_s <= 0.0 || secs < c.budget_s;
    bool pass = l.pass && in_time;
    all = all && pass;
    char timing[64];
    if (c.budget_s > 0.0)
      std::snprintf(timing, sizeof timing, "%.2fs < %.0fs", secs, c.budget_s);
    else
      std::snprintf(timing, sizeof timing, "%.2fs", secs);
    std::printf("criterion %d %s: %s [%s]%s\n", c.id, pass ? "PASS" : "FAIL", c.title, timing, l.notes.c_str());
  }
  return all ? 0 : 1;
}
