#include "dirac/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <memory>
#include <mutex>
#include <set>

#include "dirac/equivariant.hpp"
#include "dirac/foliation.hpp"
#include "dirac/liegroup.hpp"
#include "dirac/realization.hpp"

namespace dirac {

using json = nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

CheckResult result(double residual, double threshold, std::optional<Vec> worst = std::nullopt,
                   std::string detail = "") {
  CheckResult r;
  r.residual = residual;
  r.threshold = threshold;
  r.worst_point = std::move(worst);
  r.detail = std::move(detail);
  return r;
}

CheckResult from_residual(const Residual& res, double threshold, std::string detail = "") {
  return result(res.value, threshold, res.seen ? std::optional<Vec>(res.worst_point) : std::nullopt,
                std::move(detail));
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::vector<Vec> draw_points(const BoxSampler& b, std::uint64_t seed, int count) {
  SampleRng rng(seed);
  std::vector<Vec> out;
  for (int i = 0; i < count; ++i) out.push_back(b.draw(rng));
  return out;
}

std::vector<Vec> box_points(int n, double r, std::uint64_t seed, int count) {
  return draw_points(box_sampler(Vec::Constant(n, -r), Vec::Constant(n, r)), seed, count);
}

// Residual = shortfall of the fitted order below `min_order`, plus one if not monotone.
CheckResult convergence_check(const std::function<double(int)>& f, const std::vector<int>& grids,
                              double min_order = 1.8) {
  Convergence c = convergence_study(f, grids);
  double shortfall = std::isfinite(c.order) ? std::max(0.0, min_order - c.order) : kInf;
  if (!c.monotone) shortfall += 1.0;
  CheckResult r = result(shortfall, 0.0, std::nullopt,
                         "fitted order " + fmt(c.order) + (c.monotone ? ", monotone" : ", not monotone") +
                             ", required order >= " + fmt(min_order));
  r.convergence = c;
  return r;
}

void add(Fixture& f, std::string name, std::string description, std::function<CheckResult(const NumericPolicy&)> run,
         bool expected = true) {
  f.checks.push_back({std::move(name), std::move(description), expected, std::move(run)});
}

// ---------------------------------------------------------------------------------------------
// Groupoid fixtures share one classification per run.

struct GroupoidCase {
  std::function<std::pair<ChartGroupoid, GroupoidForm>()> build;
  std::once_flag built_flag;
  std::once_flag classified_flag;
  ChartGroupoid g;
  GroupoidForm f;
  ClassificationReport rep;

  void ensure_built() {
    std::call_once(built_flag, [this] {
      auto [gg, ff] = build();
      g = std::move(gg);
      f = std::move(ff);
    });
  }
  const ClassificationReport& report(const NumericPolicy& p) {
    ensure_built();
    std::call_once(classified_flag, [&] {
      SamplePolicy sp;
      sp.seed = p.seed;
      sp.samples = p.samples;
      rep = classify(g, f, sp, p.tol);
    });
    return rep;
  }
};

struct FlagExpectations {
  bool dirac_type = true;
  bool robust = true;
  bool presymplectic = true;
  bool over_symplectic = true;
  bool nondegenerate = true;
};

std::vector<RankDiagnostic> indeterminate_only(const ClassificationReport& rep) {
  std::vector<RankDiagnostic> out;
  for (const auto& d : rep.rank_diagnostics)
    if (d.info.indeterminate) out.push_back(d);
  return out;
}

void add_groupoid_checks(Fixture& fx, const std::shared_ptr<GroupoidCase>& gc, const FlagExpectations& e) {
  struct Group {
    const char* name;
    const char* description;
    std::vector<const char*> keys;
  };
  const std::vector<Group> groups = {
      {"structure", "groupoid axioms on sampled arrows, pairs and triples",
       {"structure_units", "structure_source_target", "structure_associativity", "structure_inverse"}},
      {"multiplicative", "m*ω − pr1*ω − pr2*ω on composable pairs", {"multiplicative"}},
      {"rel_closed", "dω − (s*φ − t*φ) on sampled arrows", {"rel_closed"}},
      {"unit_pullback", "ε*ω = 0", {"unit_pullback"}},
      {"inverse_pullback", "i*ω = −ω", {"inverse_pullback"}},
      {"kernel_orthogonality", "Ker(ds) + Ker(ω) ⊆ Ker(dt)^⊥ at sampled arrows", {"kernel_orthogonality"}},
      {"unit_identities", "unit identities T_xM + Ker(ω_x) = (T_xM)^⊥, kernel splitting and dimension counts",
       {"unit_dimension_identities", "unit_subspace_identities", "unit_decomposition"}},
  };
  for (const auto& grp : groups) {
    add(fx, grp.name, grp.description, [gc, grp](const NumericPolicy& p) {
      const auto& rep = gc->report(p);
      Residual worst;
      for (const char* k : grp.keys) {
        auto it = rep.residuals.find(k);
        if (it == rep.residuals.end()) throw std::logic_error(std::string("missing residual ") + k);
        worst.merge(it->second);
      }
      CheckResult r = from_residual(worst, p.tol);
      r.rank_diagnostics = indeterminate_only(rep);
      return r;
    });
  }
  add(fx, "orbit_form", "ω − (t*θ_S − s*θ_S) where the fixture supplies θ_S", [gc](const NumericPolicy& p) {
    const auto& rep = gc->report(p);
    auto it = rep.residuals.find("orbit_form");
    if (it == rep.residuals.end()) return result(0.0, p.tol, std::nullopt, "fixture has no orbit form");
    return from_residual(it->second, p.tol);
  });
  add(fx, "dirac_type", "dim Ker(ω_g) = ½(dim Ker(ω_s(g)) + dim Ker(ω_t(g))) at sampled arrows",
      [gc](const NumericPolicy& p) {
        const auto& rep = gc->report(p);
        CheckResult r = result(rep.dirac_type_violations, 0.0, rep.dirac_type_witness,
                               std::to_string(rep.dirac_type_violations) + " violating arrows" +
                                   (rep.dirac_type_witness ? ", witness is the base point" : ""));
        r.rank_diagnostics = indeterminate_only(rep);
        return r;
      },
      e.dirac_type);
  const std::vector<std::tuple<const char*, const char*, bool>> flags = {
      {"robust", "is_robust", e.robust},
      {"presymplectic", "is_presymplectic", e.presymplectic},
      {"over_symplectic", "is_over_symplectic", e.over_symplectic},
      {"nondegenerate", "is_nondegenerate", e.nondegenerate},
  };
  for (const auto& [name, key, want] : flags) {
    std::string k = key;
    add(fx, name, std::string("classification flag ") + key, [gc, k](const NumericPolicy& p) {
      const auto& rep = gc->report(p);
      bool v = rep.flags.at(k);
      CheckResult r = result(v ? 0.0 : 1.0, 0.0, std::nullopt, k + " = " + (v ? "true" : "false"));
      r.rank_diagnostics = indeterminate_only(rep);
      return r;
    }, want);
  }
  add(fx, "rank_stability", "number of indeterminate singular-value rank decisions (all decisions listed)",
      [gc](const NumericPolicy& p) {
        const auto& rep = gc->report(p);
        double bad = 0;
        for (const auto& d : rep.rank_diagnostics) bad += d.info.indeterminate ? 1 : 0;
        CheckResult r = result(bad, 0.0, std::nullopt, std::to_string(rep.rank_diagnostics.size()) + " rank decisions");
        r.rank_diagnostics = rep.rank_diagnostics;
        return r;
      });
}

// Induced Dirac structure at sampled units against an expected structure.
void add_induced_check(Fixture& fx, const std::shared_ptr<GroupoidCase>& gc, std::string name, std::string description,
                       std::function<LinearDirac(const Vec&)> expected, int max_points = 32) {
  add(fx, std::move(name), std::move(description), [gc, expected, max_points](const NumericPolicy& p) {
    gc->ensure_built();
    Residual res;
    for (const auto& x : draw_points(gc->g.bases, p.seed + 1, std::min(p.samples, max_points)))
      res.update(span_distance(induced_dirac(gc->g, gc->f, x), expected(x)), x);
    return from_residual(res, p.tol, "canonical span distance");
  });
}

// ---------------------------------------------------------------------------------------------

Form pair_r2_omega() { return form_from_strings(Chart(2), 2, {{"12", "1 + x1*x1"}}); }

Form twisted_r3_omega() {
  return form_from_strings(Chart(3), 2, {{"12", "2 + x3"}, {"13", "x1*x2"}, {"23", "sin(x1)"}});
}

Fixture pair_groupoid_fixture(const std::string& name, const std::string& description, const Form& omega_m,
                              bool twisted, const FlagExpectations& e) {
  const int n = omega_m.dim();
  Form phi = twisted ? (-1.0) * ext_d(omega_m) : Form();
  Fixture fx{name, description, {}};
  auto gc = std::make_shared<GroupoidCase>();
  gc->build = [omega_m, phi, n] { return pair_groupoid(omega_m, phi, Vec::Constant(n, -1.0), Vec::Constant(n, 1.0)); };
  add_groupoid_checks(fx, gc, e);
  add_induced_check(fx, gc, "induced_graph", "induced Dirac structure equals the graph of ω_M",
                    [omega_m](const Vec& x) { return from_form(form_matrix(omega_m, x)); });
  add(fx, "gauge_induced", "after gauge by B = sin(x1) dx1∧dx2 the induced structure is the graph of ω_M + B",
      [gc, omega_m, n](const NumericPolicy& p) {
        gc->ensure_built();
        Form b = form_from_strings(Chart(n), 2, {{"12", "sin(x1)"}});
        GroupoidForm gf = gauge(gc->g, gc->f, b);
        Residual res;
        for (const auto& x : draw_points(gc->g.bases, p.seed + 2, std::min(p.samples, 16)))
          res.update(span_distance(induced_dirac(gc->g, gf, x), from_form(form_matrix(omega_m + b, x))), x);
        return from_residual(res, p.tol);
      });
  if (twisted)
    add(fx, "graph_integrability", "graph of ω_M is closed under the φ-twisted bracket",
        [omega_m, phi, n](const NumericPolicy& p) {
          return from_residual(integrability_residual(graph_field(omega_m), phi, box_points(n, 1.0, p.seed + 3, 16)),
                               1e-9);
        });
  return fx;
}

Fixture nondirac_flow_fixture() {
  Fixture fx{"nondirac-flow", "flow groupoid of x∂y − y∂x on R² with ω = t*θ − s*θ, θ = y dx∧dy", {}};
  auto gc = std::make_shared<GroupoidCase>();
  gc->build = [] { return rotation_flow_groupoid(); };
  FlagExpectations e;
  e.dirac_type = false;
  e.robust = false;
  e.presymplectic = false;
  e.over_symplectic = false;
  e.nondegenerate = false;
  add_groupoid_checks(fx, gc, e);
  add(fx, "dirac_type_witness", "distance of the Dirac-type witness from (±1, 0)", [gc](const NumericPolicy& p) {
    const auto& rep = gc->report(p);
    if (!rep.dirac_type_witness) return result(kInf, 1e-2, std::nullopt, "no witness found");
    Vec w = *rep.dirac_type_witness;
    Vec a(2), b(2);
    a << 1.0, 0.0;
    b << -1.0, 0.0;
    return result(std::min((w - a).norm(), (w - b).norm()), 1e-2, w);
  });
  return fx;
}

Fixture foliation_groupoid_fixture() {
  Fixture fx{"foliation-groupoid", "G(F)⋉ν* for F = span(∂1, ∂2) on R³ with ω_F = dz∧dv", {}};
  auto gc = std::make_shared<GroupoidCase>();
  gc->build = [] { return foliation_groupoid(3, 2); };
  FlagExpectations e;
  e.over_symplectic = false;
  e.nondegenerate = false;
  add_groupoid_checks(fx, gc, e);
  CoordFoliation f(3, 2);
  add_induced_check(fx, gc, "induced_foliation_dirac", "induced Dirac structure equals F ⊕ ν*",
                    [f](const Vec&) { return foliation_dirac(f); });
  add(fx, "foliation_dirac_integrable", "L_F frame closed under the untwisted bracket", [f](const NumericPolicy& p) {
    return from_residual(integrability_residual(foliation_dirac_field(f), Form(), box_points(3, 1.0, p.seed, 16)),
                         1e-9);
  });
  add(fx, "c_omega_vanishes", "c_ω of ω_F vanishes on F at units", [gc](const NumericPolicy& p) {
    gc->ensure_built();
    Residual res;
    for (const auto& x : draw_points(gc->g.bases, p.seed + 4, 8)) res.update(max_abs(c_omega(gc->g, gc->f, 2, x)), x);
    return from_residual(res, 1e-9);
  });
  return fx;
}

Fixture amm_fixture(const std::string& group) {
  MatrixGroup h = MatrixGroup::by_name(group);
  Fixture fx{"amm-" + group, "AMM groupoid H⋉H over " + group + " with the Cartan 3-form", {}};
  auto gc = std::make_shared<GroupoidCase>();
  gc->build = [h] { return amm_groupoid(h); };
  add_groupoid_checks(fx, gc, FlagExpectations{});
  add_induced_check(fx, gc, "induced_cartan_dirac", "induced Dirac structure equals the Cartan-Dirac structure",
                    [h](const Vec& u) { return cartan_dirac_chart(h, u); });
  add(fx, "rho_star_match", "extracted ρ* equals ½(v_r + v_l)♭ at sampled units", [gc, h](const NumericPolicy& p) {
    gc->ensure_built();
    auto rs = cartan_rho_star(h);
    Residual res;
    for (const auto& u : draw_points(gc->g.bases, p.seed + 5, std::min(p.samples, 32))) {
      Mat got = extract_rho_star(gc->g, gc->f, u).rho_star;
      Mat want(h.dim(), h.dim());
      for (int i = 0; i < h.dim(); ++i) want.col(i) = covector(rs[i], u);
      res.update(max_abs(got - want), u);
    }
    return from_residual(res, 1e-9);
  });
  add(fx, "cartan_integrability", "Cartan-Dirac frame closed under the φ-twisted bracket", [h](const NumericPolicy& p) {
    CartanTriple tr = conjugation_triple(h);
    return from_residual(
        integrability_residual(cartan_dirac_field(h), cartan_form(h), draw_points(tr.points, p.seed + 6, 16)), 1e-8);
  });
  add(fx, "cartan_model", "equivariant closedness r1, r2, r3 of (ρ*, φ) for the conjugation action",
      [h](const NumericPolicy& p) {
        CartanTriple tr = conjugation_triple(h);
        auto r = cartan_closed_residual(tr, draw_points(tr.points, p.seed + 7, 16));
        Residual all;
        all.merge(r.r1);
        all.merge(r.r2);
        all.merge(r.r3);
        return from_residual(all, 1e-8, "r1 " + fmt(r.r1.value) + ", r2 " + fmt(r.r2.value) + ", r3 " + fmt(r.r3.value));
      });
  add(fx, "group_invariance", "g*(ρ*(Ad_g v)) = ρ*(v) at sampled group elements", [h](const NumericPolicy& p) {
    CartanTriple tr = conjugation_triple(h);
    SampleRng rng(p.seed + 8);
    return from_residual(group_invariance_residual(tr, draw_group_points(tr, rng, 16)), 1e-8);
  });
  if (h.kind() == GroupKind::SU2) {
    add(fx, "minus_one_kernel", "at g0 = diag(i, −i) the kernel of L is Ker(Ad + 1), of dimension 2",
        [h](const NumericPolicy&) {
          Mat g0 = h.basis()[0];
          InducedData d = induced(cartan_dirac(h, g0));
          Mat want = null_space(Mat(h.ad_matrix<double>(g0) + Mat::Identity(3, 3)));
          double dim_gap = std::abs(static_cast<double>(d.kernel.cols()) - 2.0);
          return result(dim_gap + subspace_distance(d.kernel, want), 1e-9, std::nullopt,
                        "kernel dimension " + std::to_string(d.kernel.cols()));
        });
  }
  return fx;
}

Fixture coadjoint_fixture(const std::string& group) {
  MatrixGroup h = MatrixGroup::by_name(group);
  Fixture fx{"coadjoint-" + group, "T*H ≅ H⋉𝔥* over " + group + " with the canonical symplectic form", {}};
  auto gc = std::make_shared<GroupoidCase>();
  gc->build = [h] { return coadjoint_groupoid(h); };
  add_groupoid_checks(fx, gc, FlagExpectations{});
  add(fx, "liouville", "ω + dσ with σ the Liouville form in the trivialization", [gc, h](const NumericPolicy& p) {
    gc->ensure_built();
    Form w = gc->f.omega + ext_d(liouville_form(h));
    Residual res;
    for (const auto& a : draw_points(gc->g.arrows, p.seed + 9, 16)) res.update(max_abs(form_matrix(w, a)), a);
    return from_residual(res, 1e-9);
  });
  add(fx, "cartan_model", "equivariant closedness r1, r2, r3 for the coadjoint action", [h](const NumericPolicy& p) {
    CartanTriple tr = coadjoint_triple(h);
    auto r = cartan_closed_residual(tr, draw_points(tr.points, p.seed + 10, 16));
    Residual all;
    all.merge(r.r1);
    all.merge(r.r2);
    all.merge(r.r3);
    return from_residual(all, 1e-10);
  });
  add(fx, "cocycle", "slice-restriction defect of ω + t*B − s*B, B = x1 dx2∧dx3 closed, satisfies the cocycle identity",
      [gc, h](const NumericPolicy& p) {
        gc->ensure_built();
        CartanTriple tr = coadjoint_triple(h);
        Form b = form_from_strings(Chart(tr.m), 2, {{"23", "1 + x1*x1"}});
        GroupoidForm gf = gauge(gc->g, gc->f, b);
        SampleRng rng(p.seed + 11);
        return from_residual(cocycle_residual(tr, gf.omega, draw_group_pairs(tr, rng, 16)), 1e-9);
      });
  return fx;
}

Fixture qham_fixture() {
  Fixture fx{"qham-r2-u1", "R² with η = dx∧dy, μ = ½(x² + y²) into U(1) and the rotation action", {}};
  auto points = [](const NumericPolicy& p) { return draw_points(rotation_plane_qham().points, p.seed, p.samples); };
  auto qh = [points](const NumericPolicy& p) { return quasi_ham_check(rotation_plane_qham(0.5), points(p)); };
  const std::vector<std::pair<const char*, const char*>> parts = {
      {"qham_closedness", "dη + μ*φ"},
      {"qham_moment", "i_{ρ(v)}η − μ*ρ*(v)"},
      {"qham_kernel", "Ker(η) = {ρ_P(v) : v ∈ Ker(Ad_μ + 1)}"},
      {"qham_invariance", "L_{ρ(v)} η"},
      {"qham_equivariance", "dμ ∘ ρ_P − ρ_H ∘ μ"},
  };
  for (const auto& [name, description] : parts) {
    std::string nm = name;
    add(fx, nm, description, [qh, nm](const NumericPolicy& p) {
      QuasiHamResiduals r = qh(p);
      const Residual& v = nm == "qham_closedness" ? r.r1
                          : nm == "qham_moment"   ? r.r2
                          : nm == "qham_kernel"   ? r.r3
                          : nm == "qham_invariance" ? r.invariance
                                                    : r.equivariance;
      CheckResult c = from_residual(v, 1e-8);
      for (const auto& d : r.rank_diagnostics)
        if (d.info.indeterminate) c.rank_diagnostics.push_back(d);
      return c;
    });
  }
  add(fx, "crosscheck_generators", "generators recovered from the realization equal the given action",
      [points](const NumericPolicy& p) {
        CrosscheckReport c = equivalence_crosscheck(rotation_plane_qham(0.5), points(p));
        return from_residual(c.generators, 1e-8);
      });
  add(fx, "crosscheck_realization", "realization solve residual into the Cartan-Dirac structure",
      [points](const NumericPolicy& p) {
        CrosscheckReport c = equivalence_crosscheck(rotation_plane_qham(0.5), points(p));
        double extra = c.realization.unsolvable + c.realization.degenerate;
        CheckResult r = from_residual(c.realization.solve, 1e-8, c.realization.failure);
        r.residual = std::max({r.residual, c.realization.kernel_map.value, c.realization.closedness.value}) + extra;
        return r;
      });
  add(fx, "perturbed_moment", "moment map doubled: the moment condition residual must exceed 0.1",
      [points](const NumericPolicy& p) {
        return from_residual(quasi_ham_check(rotation_plane_qham(1.0), points(p)).r2, 0.1);
      },
      false);
  return fx;
}

// Catalog A = TM scenario on R³.
struct PathScenario {
  Form omega_m;
  Form phi;
  AlgebroidPresentation alg;
  GaugeParameter eta;
  SmoothMap gamma;
  std::vector<SmoothMap> probes;

  explicit PathScenario(bool twisted) {
    Chart c(3);
    omega_m = twisted ? twisted_r3_omega()
                      : ext_d(form_from_strings(c, 1, {{"1", "x3"}, {"2", "sin(x1)"}, {"3", "x1*x2"}}));
    if (twisted) phi = (-1.0) * ext_d(omega_m);
    alg = tangent_algebroid(omega_m);
    eta.profile = expr_map({"cos(x1) + t", "x2*x3", "sin(2*t) + x1"}, {"t", "x1", "x2", "x3"});
    gamma = expr_map({"0.3*sin(2*t)", "t*t - 0.2", "0.5*cos(t)"}, {"t"});
    probes = {expr_map({"cos(t)", "t", "0.2"}, {"t"}), expr_map({"t*t", "sin(3*t)", "1 - t"}, {"t"}),
              expr_map({"0.5", "exp(t)*0.3", "t*t*t"}, {"t"})};
  }

  DiscretizedAPath path(int n) const { return tangent_path(gamma, n); }
  std::vector<PathTangent> tangents(const DiscretizedAPath& p) const {
    std::vector<PathTangent> out;
    for (const auto& x : probes) out.push_back(tangent_probe(p, x));
    return out;
  }
  double step(const DiscretizedAPath& p, const NumericPolicy& pol) const {
    return pol.fd_step ? *pol.fd_step : fd_step(p);
  }
  BasicnessReport basic(int n, const NumericPolicy& pol) const {
    auto p = path(n);
    return basicness_residual(alg, p, eta, phi, tangents(p), step(p, pol));
  }
};

Fixture pathspace_fixture() {
  Fixture fx{"pathspace-pair", "A = TM on R³ with ρ* = ω̃_M; closed case and twisted case φ = −dω_M", {}};
  auto closed = std::make_shared<PathScenario>(false);
  auto twisted = std::make_shared<PathScenario>(true);
  add(fx, "basicness", "|ω̃(X_η, X) + ω_φ(X_η, X)| at N = 64, closed case", [closed](const NumericPolicy& p) {
    return result(closed->basic(64, p).basicness, 5e-4);
  });
  add(fx, "basicness_convergence", "basicness residual over the grid ladder, closed case",
      [closed](const NumericPolicy& p) {
        return convergence_check([&](int n) { return closed->basic(n, p).basicness; }, p.grid);
      });
  add(fx, "basicness_twisted_convergence", "basicness residual over the grid ladder, twisted case",
      [twisted](const NumericPolicy& p) {
        return convergence_check([&](int n) { return twisted->basic(n, p).basicness; }, p.grid);
      });
  add(fx, "omega_phi_identity", "ω_φ(X_η, X) − ∫ φ(ρa, ρη, dγX) at N = 64, twisted case",
      [twisted](const NumericPolicy& p) { return result(twisted->basic(64, p).lemma52, 1e-10); });
  add(fx, "sigma_contraction", "σ̃(X_η) + ∫⟨ρ*η, ρa⟩ at N = 64", [closed, twisted](const NumericPolicy& p) {
    return result(std::max(closed->basic(64, p).sigma_contraction, twisted->basic(64, p).sigma_contraction), 1e-10);
  });
  add(fx, "endpoint_convergence", "(ω̃ + ω_φ) + ω_M|₁ − ω_M|₀ over the grid ladder, twisted case",
      [twisted](const NumericPolicy& p) {
        return convergence_check([&](int n) {
          auto path = twisted->path(n);
          return endpoint_residual(twisted->alg, path, twisted->phi, twisted->omega_m, twisted->tangents(path),
                                   twisted->step(path, p));
        }, p.grid);
      });
  add(fx, "rel_closed_convergence", "dω_φ-type relative closedness on path space over the grid ladder, twisted case",
      [twisted](const NumericPolicy& p) {
        return convergence_check([&](int n) {
          auto path = twisted->path(n);
          return path_rel_closed_residual(twisted->alg, path, twisted->phi, twisted->tangents(path),
                                          twisted->step(path, p));
        }, p.grid);
      });
  add(fx, "rel_closed_untwisted", "relative closedness on path space at N = 64, closed case",
      [closed](const NumericPolicy& p) {
        auto path = closed->path(64);
        return result(path_rel_closed_residual(closed->alg, path, closed->phi, closed->tangents(path),
                                               closed->step(path, p)),
                      1e-8);
      });
  add(fx, "a_path_convergence", "A-path residual of the sampled path over the grid ladder",
      [closed](const NumericPolicy& p) {
        return convergence_check([&](int n) { return a_path_residual(closed->alg, closed->path(n)); }, p.grid);
      });
  add(fx, "extension_independence", "gauge vectors from the constant and a linear-in-x section extension agree",
      [closed](const NumericPolicy& p) {
        auto path = closed->path(64);
        SampleRng rng(p.seed + 12);
        Mat b = rng.matrix(3, 3);
        PathTangent a = gauge_vector(closed->alg, path, closed->eta);
        PathTangent c = gauge_vector(closed->alg, path, closed->eta, b);
        double worst = 0.0;
        for (std::size_t i = 0; i < a.da.size(); ++i)
          worst = std::max({worst, (a.da[i] - c.da[i]).lpNorm<Eigen::Infinity>(),
                            (a.dgamma[i] - c.dgamma[i]).lpNorm<Eigen::Infinity>()});
        return result(worst, 1e-6);
      });
  add(fx, "boundary_identity", "path integration-by-parts identity at N = 128 on catalog inputs",
      [](const NumericPolicy& p) {
        double h = p.fd_step ? *p.fd_step : 1e-4;
        auto t = [](std::vector<std::string> c) { return expr_map(c, {"t"}); };
        double a = path_boundary_identity_residual(t({"t"}), t({"1"}), expr_map({"t"}, {"t", "x1"}), 128, h);
        double b = path_boundary_identity_residual(t({"t", "t*t"}), t({"1", "2*t"}),
                                                   expr_map({"x2 + t", "-x1"}, {"t", "x1", "x2"}), 128, h);
        return result(std::max(a, b), 1e-6, std::nullopt, "u = t dx: " + fmt(a) + ", planar case: " + fmt(b));
      });
  add(fx, "boundary_identity_convergence", "integration-by-parts identity on a generic input over the grid ladder",
      [](const NumericPolicy& p) {
        double h = p.fd_step ? *p.fd_step : 1e-4;
        auto gamma = expr_map({"t", "t*t/2"}, {"t"});
        auto xp = expr_map({"1 + t", "cos(t)"}, {"t"});
        auto u = expr_map({"t*x2 + x1*x1", "sin(x1) + t*t"}, {"t", "x1", "x2"});
        return convergence_check([&](int n) { return path_boundary_identity_residual(gamma, xp, u, n, h); }, p.grid);
      });
  return fx;
}

Fixture foliation_classes_fixture() {
  Fixture fx{"foliation-classes", "foliated calculus on coordinate foliations of R³ (k = 2) and R⁴ (k = 3)", {}};
  add(fx, "dF_squared", "d_F ∘ d_F on scalar, leafwise 1-form and ν*-valued inputs", [](const NumericPolicy& p) {
    CoordFoliation f3(3, 2), f4(4, 3);
    auto x3 = box_points(3, 1.0, p.seed, 8);
    auto x4 = box_points(4, 1.0, p.seed + 1, 8);
    double r = foliated_norm(d_F(d_F(foliated_from_strings(f3, 0, {{"", "sin(x1*x3) + x2*x2*x1"}}))), x3);
    r = std::max(r, foliated_norm(d_F(d_F(foliated_from_strings(f4, 1, {{"1", "x2*x4"}, {"3", "exp(x1)*x3"}}))), x4));
    r = std::max(r, foliated_norm(d_F(d_F(foliated_nu_from_strings(
                                      f4, 1, {{4, {{"1", "x2*x4"}, {"2", "sin(x1*x3)"}, {"3", "x4*x4*x1"}}}}))),
                                  x4));
    return result(r, 1e-12);
  });
  add(fx, "bott_flatness", "curvature of the Bott connection on sample leafwise fields", [](const NumericPolicy& p) {
    CoordFoliation f(3, 2);
    Chart c(3);
    return result(bott_curvature_residual(f, field_from_strings(c, {"x2*x3", "sin(x1)", "0"}),
                                          field_from_strings(c, {"x3", "x1*x2", "0"}),
                                          field_from_strings(c, {"x1", "x3*x3", "x1*x2 + x3"}),
                                          box_points(3, 1.0, p.seed, 8)),
                  1e-12);
  });
  add(fx, "d_nu_value", "d_ν(x3 dx1∧dx2)(∂1, ∂2) = dx̄3", [](const NumericPolicy& p) {
    CoordFoliation f(3, 2);
    Form ext = form_from_strings(Chart(3), 2, {{"12", "x3"}});
    auto xs = box_points(3, 1.0, p.seed, 8);
    FoliatedForm dn = d_nu(restrict_to_leaves(f, ext), ext, xs);
    FoliatedForm one = foliated_nu_from_strings(f, 2, {{3, {{"12", "1"}}}});
    return result(foliated_distance(dn, one, xs), 1e-12);
  });
  add(fx, "d_nu_closed", "d_F of d_ν(θ) for a leafwise closed θ on R⁴, k = 3", [](const NumericPolicy& p) {
    CoordFoliation f(4, 3);
    Form ext = form_from_strings(Chart(4), 2, {{"12", "x4*sin(x1) + x1*x2"}, {"23", "x4*x3"}, {"14", "x1*x2"}});
    auto xs = box_points(4, 1.0, p.seed, 8);
    FoliatedForm theta = restrict_to_leaves(f, ext);
    return result(foliated_norm(d_F(d_nu(theta, ext, xs)), xs), 1e-10);
  });
  add(fx, "u_sigma_vs_d_nu", "u_σ from Courant brackets of the graph splitting equals d_ν(θ), θ̃ = x3 dx1∧dx2",
      [](const NumericPolicy& p) {
        CoordFoliation f(3, 2);
        Form ext = form_from_strings(Chart(3), 2, {{"12", "x3"}});
        auto xs = box_points(3, 1.0, p.seed, 8);
        FoliatedForm theta = restrict_to_leaves(f, ext);
        ClassifyingRep u = classifying_rep(f, theta, graph_splitting(f, ext), xs);
        return result(std::max(foliated_distance(u.u, d_nu(theta, ext, xs), xs), u.leaf_part.value), 1e-9);
      });
  add(fx, "splitting_change_exact", "changing σ by ψ: F → ν* changes u_σ by d_F ψ", [](const NumericPolicy& p) {
    CoordFoliation f(3, 2);
    Chart c(3);
    Form ext = form_from_strings(c, 2, {{"12", "x3*x1"}, {"13", "x2"}});
    auto xs = box_points(3, 1.0, p.seed, 8);
    FoliatedForm theta = restrict_to_leaves(f, ext);
    auto sigma = graph_splitting(f, ext);
    auto shifted = sigma;
    shifted[0] = shifted[0] + form_from_strings(c, 1, {{"3", "x1*x2"}});
    shifted[1] = shifted[1] + form_from_strings(c, 1, {{"3", "sin(x3 + x1)"}});
    FoliatedForm psi = foliated_nu_from_strings(f, 1, {{3, {{"1", "x1*x2"}, {"2", "sin(x3 + x1)"}}}});
    FoliatedForm a = classifying_rep(f, theta, sigma, xs).u;
    FoliatedForm b = classifying_rep(f, theta, shifted, xs).u;
    return result(foliated_distance(b - a, d_F(psi), xs), 1e-9);
  });
  add(fx, "extension_change_exact", "two extensions of θ give d_ν outputs differing by d_F ψ, ψ_m(∂i) = β(∂i, ∂m)",
      [](const NumericPolicy& p) {
        CoordFoliation f(3, 2);
        Chart c(3);
        Form ext = form_from_strings(c, 2, {{"12", "x3"}});
        Form beta = form_from_strings(c, 2, {{"13", "x1*x2"}, {"23", "x3*x1"}});
        auto xs = box_points(3, 1.0, p.seed, 8);
        FoliatedForm theta = restrict_to_leaves(f, ext);
        FoliatedForm psi = foliated_nu_from_strings(f, 1, {{3, {{"1", "x1*x2"}, {"2", "x3*x1"}}}});
        return result(foliated_distance(d_nu(theta, ext + beta, xs) - d_nu(theta, ext, xs), d_F(psi), xs), 1e-12);
      });
  add(fx, "twisted_shift", "u_{σ,φ} = u_σ + φ̄ for φ = (1 + x1 x3) dx1∧dx2∧dx3, φ̄ = d_F ψ", [](const NumericPolicy& p) {
    CoordFoliation f(3, 2);
    Chart c(3);
    Form ext = form_from_strings(c, 2, {{"12", "x3"}});
    Form phi = form_from_strings(c, 3, {{"123", "1 + x1*x3"}});
    auto xs = box_points(3, 1.0, p.seed, 8);
    FoliatedForm theta = restrict_to_leaves(f, ext);
    auto sigma = graph_splitting(f, ext);
    FoliatedForm plain = classifying_rep(f, theta, sigma, xs).u;
    FoliatedForm tw = classifying_rep(f, theta, sigma, xs, phi).u;
    FoliatedForm psi = foliated_nu_from_strings(f, 1, {{3, {{"2", "x1 + x1*x1*x3/2"}}}});
    double shift = foliated_distance(tw, plain + phi_bar(f, phi), xs);
    double exact = foliated_distance(phi_bar(f, phi), d_F(psi), xs);
    return result(std::max(shift, exact), 1e-9, std::nullopt, "shift " + fmt(shift) + ", φ̄ − d_F ψ " + fmt(exact));
  });
  add(fx, "c_omega_exact", "c_ω = d_F(σ|_F) for ω = t*dσ − s*dσ on the monodromy groupoid", [](const NumericPolicy& p) {
    ChartGroupoid g = monodromy_groupoid(3, 2);
    Form sig = form_from_strings(Chart(3), 1, {{"1", "x2*x3"}, {"2", "sin(x1)"}, {"3", "x1"}});
    GroupoidForm w{pullback(g.t, ext_d(sig)) - pullback(g.s, ext_d(sig)), Form(), Form()};
    return result(c_omega_exactness_residual(g, w, 2, sig, box_points(3, 1.0, p.seed, 8)), 1e-9);
  });
  return fx;
}

// ---------------------------------------------------------------------------------------------

struct LinearSuite {
  int cases = 500;
  double iso = 0.0, roundtrip = 0.0, push = 0.0, bivector_kernel = 0.0, dims = 0.0, pull_push = 0.0;
  int degenerate_push = 0;
  Vec iso_at, roundtrip_at, push_at, pull_push_at;
};

LinearSuite run_linear_suite(std::uint64_t seed) {
  LinearSuite s;
  SampleRng rng(seed);
  for (int c = 0; c < s.cases; ++c) {
    const int n = 1 + c % 6;
    const int kind = c / 6;
    Vec tag = Vec::Constant(1, c);
    Mat theta = rng.skew(n);
    Mat pi = rng.skew(n);
    Mat b = rng.skew(n);
    LinearDirac l = kind % 3 == 0 ? from_form(theta)
                    : kind % 3 == 1 ? from_bivector(pi)
                                    : gauge_transform(from_bivector(pi), b);
    if (l.isotropy_defect() > s.iso || l.basis().cols() != n) {
      s.iso = std::max(l.isotropy_defect(), l.basis().cols() != n ? 1.0 : 0.0);
      s.iso_at = tag;
    }
    if (kind % 3 == 0) {
      double r = max_abs(induced(l).theta_ambient - theta);
      if (r > s.roundtrip) {
        s.roundtrip = r;
        s.roundtrip_at = tag;
      }
    }
    if (kind % 3 == 1) s.bivector_kernel = std::max(s.bivector_kernel, static_cast<double>(induced(l).kernel.cols()));
    InducedData d = induced(l);
    s.dims = std::max(s.dims, std::abs(static_cast<double>(d.covectors.cols()) - (n - d.kernel.cols())));

    const int m = 1 + (7 * c) % 6;
    Mat psi = rng.matrix(m, n);
    try {
      LinearDirac pushed = push_forward(psi, l);
      double r = std::max(pushed.isotropy_defect(), pushed.basis().cols() != m ? 1.0 : 0.0);
      if (r > s.push) {
        s.push = r;
        s.push_at = tag;
      }
    } catch (const DegeneratePushForward&) {
      ++s.degenerate_push;
    }

    Mat f = rng.matrix(n, n) + 3.0 * Mat::Identity(n, n);
    double r = span_distance(pull_back(f, push_forward(f, l)), l);
    if (r > s.pull_push) {
      s.pull_push = r;
      s.pull_push_at = tag;
    }
  }
  return s;
}

Fixture linear_fixture() {
  Fixture fx{"linear-suite", "500 seeded linear Dirac structures in dimensions 1 to 6", {}};
  auto cache = std::make_shared<std::pair<std::once_flag, LinearSuite>>();
  auto get = [cache](const NumericPolicy& p) -> const LinearSuite& {
    std::call_once(cache->first, [&] { cache->second = run_linear_suite(p.seed); });
    return cache->second;
  };
  auto at = [](const Vec& v) { return v.size() ? std::optional<Vec>(v) : std::nullopt; };
  add(fx, "isotropy_maximality", "isotropy defect and rank n for forms, bivectors and gauged bivectors",
      [get, at](const NumericPolicy& p) {
        const auto& s = get(p);
        return result(s.iso, 1e-9, at(s.iso_at), "worst point is the case index");
      });
  add(fx, "form_roundtrip", "θ recovered from from_form(θ)", [get, at](const NumericPolicy& p) {
    const auto& s = get(p);
    return result(s.roundtrip, 1e-12, at(s.roundtrip_at), "worst point is the case index");
  });
  add(fx, "push_forward_isotropy", "push-forward stays maximal isotropic or reports degeneracy",
      [get, at](const NumericPolicy& p) {
        const auto& s = get(p);
        return result(s.push, 1e-9, at(s.push_at), std::to_string(s.degenerate_push) + " degenerate push-forwards flagged");
      });
  add(fx, "bivector_kernel", "Ker(L) = 0 for graphs of bivectors", [get](const NumericPolicy& p) {
    return result(get(p).bivector_kernel, 0.0, std::nullopt, "largest kernel dimension");
  });
  add(fx, "range_kernel_dims", "dim pr2(L) = n − dim Ker(L)", [get](const NumericPolicy& p) {
    return result(get(p).dims, 0.0);
  });
  add(fx, "pull_push_inverse", "pull-back after push-forward by an invertible map returns L",
      [get, at](const NumericPolicy& p) {
        const auto& s = get(p);
        return result(s.pull_push, 1e-8, at(s.pull_push_at), "worst point is the case index");
      });
  return fx;
}

std::string coefficient(SampleRng& rng, int n) {
  auto num = [&] { return "(" + fmt(rng.uniform(-1.0, 1.0)) + ")"; };
  auto var = [&] { return "x" + std::to_string(1 + static_cast<int>(rng.next() % n)); };
  return num() + " + " + num() + "*" + var() + " + " + num() + "*" + var() + "*" + var() + " + " + num() + "*sin(" +
         var() + ")";
}

Form random_two_form(SampleRng& rng, int n) {
  std::map<std::string, std::string> comps;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) comps[std::to_string(i) + std::to_string(j)] = coefficient(rng, n);
  return form_from_strings(Chart(n), 2, comps);
}

Fixture courant_fixture() {
  Fixture fx{"courant-graph", "graph characterization dω + φ = 0 on seeded polynomial 2-forms on R³", {}};
  add(fx, "graph_positive", "20 seeded (ω, φ = −dω): graph closed under the twisted bracket", [](const NumericPolicy& p) {
    SampleRng rng(p.seed);
    Residual res;
    for (int c = 0; c < 20; ++c) {
      Form w = random_two_form(rng, 3);
      res.merge(integrability_residual(graph_field(w), (-1.0) * ext_d(w), box_points(3, 1.0, p.seed + c, 8)));
    }
    return from_residual(res, 1e-9);
  });
  add(fx, "graph_negative", "20 seeded (ω, φ) with dω + φ = c dx1∧dx2∧dx3, |c| ≥ 0.1: smallest detected defect",
      [](const NumericPolicy& p) {
        SampleRng rng(p.seed + 100);
        double smallest = kInf;
        Vec at;
        for (int c = 0; c < 20; ++c) {
          Form w = random_two_form(rng, 3);
          double k = rng.uniform(0.1, 1.0) * (rng.next() % 2 ? 1.0 : -1.0);
          Form phi = (-1.0) * ext_d(w) + form_from_strings(Chart(3), 3, {{"123", fmt(k)}});
          Residual r = integrability_residual(graph_field(w), phi, box_points(3, 1.0, p.seed + 100 + c, 8));
          if (r.value < smallest) {
            smallest = r.value;
            at = r.worst_point;
          }
        }
        return result(smallest, 1e-3, at, "must exceed the threshold at the witnessed point");
      },
      false);
  add(fx, "twist_consistency", "[a, b]_φ − [a, b]_0 = (0, φ(X, Y, ·))", [](const NumericPolicy& p) {
    Chart c(3);
    Section a = make_section(field_from_strings(c, {"x2", "x1*x3", "1"}), form_from_strings(c, 1, {{"1", "x3"}, {"2", "x1*x1"}}));
    Section b = make_section(field_from_strings(c, {"sin(x3)", "1", "x1"}), form_from_strings(c, 1, {{"3", "x2*x1"}}));
    Form phi = form_from_strings(c, 3, {{"123", "1 + x1*x2"}});
    Section t = courant_bracket(a, b, phi), u = courant_bracket(a, b);
    Residual res;
    for (const auto& x : box_points(3, 1.0, p.seed, 16)) {
      Vec want = contract_two(phi, x, a.x(x), b.x(x));
      double r = std::max((covector(t.xi, x) - covector(u.xi, x) - want).lpNorm<Eigen::Infinity>(),
                          (t.x(x) - u.x(x)).lpNorm<Eigen::Infinity>());
      res.update(r, x);
    }
    return from_residual(res, 1e-12);
  });
  add(fx, "closed_skew", "[a, b] + [b, a] = (0, d(ξ(Y) + η(X))) for closed ξ, η", [](const NumericPolicy& p) {
    Chart c(3);
    Form xi = ext_d(form_from_strings(c, 0, {{"", "x1*x2*x3 + sin(x1)"}}));
    Form eta = ext_d(form_from_strings(c, 0, {{"", "exp(x2)*x3"}}));
    Section a = make_section(field_from_strings(c, {"x2", "x1*x3", "1"}), xi);
    Section b = make_section(field_from_strings(c, {"sin(x3)", "1", "x1"}), eta);
    Section ab = courant_bracket(a, b), ba = courant_bracket(b, a);
    Form exact = ext_d(pair(xi, b.x) + pair(eta, a.x));
    Residual res;
    for (const auto& x : box_points(3, 1.0, p.seed, 16)) {
      double r = std::max((covector(ab.xi, x) + covector(ba.xi, x) - covector(exact, x)).lpNorm<Eigen::Infinity>(),
                          (ab.x(x) + ba.x(x)).lpNorm<Eigen::Infinity>());
      res.update(r, x);
    }
    return from_residual(res, 1e-9);
  });
  return fx;
}

// ---------------------------------------------------------------------------------------------
// Inline fixtures.

std::map<std::string, std::string> components(const json& j, const std::string& where) {
  if (!j.is_object()) throw ScenarioError("expected an object of components", where);
  std::map<std::string, std::string> out;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_string()) throw ScenarioError("component value must be an expression string", where + "." + k);
    out[k] = v.get<std::string>();
  }
  return out;
}

Form parsed_form(int n, int degree, const json& j, const std::string& where) {
  auto comps = components(j, where);
  for (const auto& [k, src] : comps) {
    try {
      parse(src, default_variables(n));
    } catch (const ParseError& e) {
      throw ScenarioError(std::string(e.what()) + " in \"" + src + "\"",
                          where + "." + k);
    }
  }
  try {
    return form_from_strings(Chart(n), degree, comps);
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(e.what(), where);
  }
}

int get_int(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_number_integer())
    throw ScenarioError(std::string("missing integer field '") + key + "'", where);
  return j[key].get<int>();
}

Fixture inline_pair(const json& j, const std::string& where) {
  int n = get_int(j, "n", where);
  if (n < 1 || n > 4) throw ScenarioError("n must be between 1 and 4", where + ".n");
  Form omega = parsed_form(n, 2, j.value("omega", json::object()), where + ".omega");
  bool twisted = j.value("twisted", false);
  if (twisted && n < 3) throw ScenarioError("a twisted pair groupoid needs n >= 3", where + ".twisted");
  FlagExpectations e;
  e.nondegenerate = n % 2 == 0;
  e.over_symplectic = n % 2 == 0;
  return pair_groupoid_fixture("inline-pair-groupoid", "inline pair groupoid", omega, twisted, e);
}

Fixture inline_courant(const json& j, const std::string& where) {
  int n = get_int(j, "n", where);
  if (n < 1 || n > 4) throw ScenarioError("n must be between 1 and 4", where + ".n");
  Form omega = parsed_form(n, 2, j.value("omega", json::object()), where + ".omega");
  Form phi = j.contains("phi") ? parsed_form(n, 3, j["phi"], where + ".phi") : Form();
  Fixture fx{"inline-courant-graph", "inline graph of a 2-form with a twist", {}};
  add(fx, "graph_integrability", "graph of ω closed under the φ-twisted bracket", [omega, phi, n](const NumericPolicy& p) {
    return from_residual(integrability_residual(graph_field(omega), phi, box_points(n, 1.0, p.seed, p.samples)), 1e-9);
  });
  add(fx, "closedness_defect", "|dω + φ| at sampled points", [omega, phi, n](const NumericPolicy& p) {
    Residual res;
    if (n >= 3) {
      Form f = ext_d(omega);
      if (phi.valid()) f = f + phi;
      for (const auto& x : box_points(n, 1.0, p.seed, p.samples))
        res.update(form_components(f, x).lpNorm<Eigen::Infinity>(), x);
    }
    return from_residual(res, 1e-9);
  });
  return fx;
}

Fixture inline_foliation(const json& j, const std::string& where) {
  int n = get_int(j, "n", where);
  int k = get_int(j, "k", where);
  if (n < 1 || n > 4 || k < 2 || k > n) throw ScenarioError("need 2 <= k <= n <= 4", where);
  CoordFoliation f(n, k);
  const json theta_json = j.value("theta", json::object());
  Form theta_form = parsed_form(n, 2, theta_json, where + ".theta");
  for (const auto& [key, _] : theta_json.items())
    for (char ch : key)
      if (ch - '0' > k) throw ScenarioError("θ may only use leaf directions", where + ".theta." + key);
  Form ext = parsed_form(n, 2, j.value("extension", json::object()), where + ".extension");
  Form phi = j.contains("phi") ? parsed_form(n, 3, j["phi"], where + ".phi") : Form();
  FoliatedForm theta = restrict_to_leaves(f, theta_form);
  Fixture fx{"inline-foliation", "inline coordinate foliation with a leafwise 2-form", {}};
  add(fx, "d_nu_closed", "d_F of d_ν(θ)", [f, theta, ext, n](const NumericPolicy& p) {
    auto xs = box_points(n, 1.0, p.seed, std::min(p.samples, 16));
    FoliatedForm dn = d_nu(theta, ext, xs);
    if (f.k < 3) return result(0.0, 1e-10, std::nullopt, "no leafwise 3-forms");
    return result(foliated_norm(d_F(dn), xs), 1e-10);
  });
  add(fx, "u_sigma_vs_d_nu", "u_σ of the graph splitting against d_ν(θ)", [f, theta, ext, n](const NumericPolicy& p) {
    auto xs = box_points(n, 1.0, p.seed, std::min(p.samples, 16));
    ClassifyingRep u = classifying_rep(f, theta, graph_splitting(f, ext), xs);
    return result(std::max(foliated_distance(u.u, d_nu(theta, ext, xs), xs), u.leaf_part.value), 1e-9);
  });
  if (phi.valid())
    add(fx, "twisted_shift", "u_{σ,φ} = u_σ + φ̄", [f, theta, ext, phi, n](const NumericPolicy& p) {
      auto xs = box_points(n, 1.0, p.seed, std::min(p.samples, 16));
      if (leafwise_phi_residual(f, phi, xs) > 1e-12) throw std::invalid_argument("φ must vanish on leaf triples");
      auto sigma = graph_splitting(f, ext);
      FoliatedForm plain = classifying_rep(f, theta, sigma, xs).u;
      FoliatedForm tw = classifying_rep(f, theta, sigma, xs, phi).u;
      return result(foliated_distance(tw, plain + phi_bar(f, phi), xs), 1e-9);
    });
  return fx;
}

json rank_json(const RankDiagnostic& d) {
  return {{"where", d.where},
          {"rank", d.info.rank},
          {"sigma_max", d.info.sigma_max},
          {"threshold", d.info.threshold},
          {"smallest_kept", d.info.smallest_kept},
          {"largest_dropped", d.info.largest_dropped},
          {"indeterminate", d.info.indeterminate}};
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

void NumericPolicy::validate() const {
  if (samples <= 0) throw ScenarioError("samples must be positive", "policy.samples");
  if (!(tol > 0.0)) throw ScenarioError("tol must be positive", "policy.tol");
  if (grid.size() < 2) throw ScenarioError("grid needs at least two sizes", "policy.grid");
  for (int g : grid)
    if (g < 2) throw ScenarioError("grid sizes must be at least 2", "policy.grid");
  if (fd_step && !(*fd_step > 0.0)) throw ScenarioError("fd_step must be positive", "policy.fd_step");
}

json to_json(const NumericPolicy& p) {
  json j{{"seed", p.seed}, {"samples", p.samples}, {"tol", p.tol}, {"grid", p.grid}};
  j["fd_step"] = p.fd_step ? json(*p.fd_step) : json("auto");
  return j;
}

void CheckResult::settle() {
  bool indeterminate = false;
  for (const auto& d : rank_diagnostics) indeterminate = indeterminate || d.info.indeterminate;
  pass = std::isfinite(residual) && residual <= threshold && !indeterminate;
}

json to_json(const CheckResult& c) {
  json j{{"name", c.name},
         {"pass", c.pass},
         {"expected", c.expected},
         {"ok", c.ok()},
         {"residual", number_or_null(c.residual)},
         {"threshold", c.threshold},
         {"detail", c.detail}};
  j["worst_point"] = c.worst_point ? json(to_std(*c.worst_point)) : json(nullptr);
  json ranks = json::array();
  for (const auto& d : c.rank_diagnostics) ranks.push_back(rank_json(d));
  j["rank_diagnostics"] = ranks;
  if (c.convergence) {
    json res = json::array();
    for (double r : c.convergence->residuals) res.push_back(number_or_null(r));
    j["convergence"] = {{"grids", c.convergence->grids},
                        {"residuals", res},
                        {"order", number_or_null(c.convergence->order)},
                        {"monotone", c.convergence->monotone}};
  } else {
    j["convergence"] = nullptr;
  }
  return j;
}

const CheckSpec* Fixture::find(const std::string& check) const {
  for (const auto& c : checks)
    if (c.name == check) return &c;
  return nullptr;
}

bool Report::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.ok(); });
}

json versions() {
  return {{"dirac", kLibraryVersion},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
          {"compiler", __VERSION__}};
}

json to_json(const Report& r) {
  json checks = json::array();
  int passed = 0, expected_failures = 0, unexpected = 0;
  for (const auto& c : r.checks) {
    checks.push_back(to_json(c));
    passed += c.pass ? 1 : 0;
    expected_failures += (!c.pass && !c.expected) ? 1 : 0;
    unexpected += c.ok() ? 0 : 1;
  }
  return {{"schema", kSchemaVersion},
          {"scenario", r.scenario},
          {"fixture", r.fixture},
          {"policy", to_json(r.policy)},
          {"checks", checks},
          {"summary",
           {{"total", r.checks.size()}, {"passed", passed}, {"expected_failures", expected_failures}, {"unexpected", unexpected}}},
          {"ok", r.ok()},
          {"versions", versions()},
          {"wall_time_s", r.wall_time_s}};
}

std::vector<std::string> builtin_fixture_names() {
  std::vector<std::string> names = {"amm-so3",         "amm-su2",           "coadjoint-so3",   "courant-graph",
                                    "foliation-classes", "foliation-groupoid", "linear-suite",    "nondirac-flow",
                                    "pair-groupoid-r2", "pathspace-pair",    "qham-r2-u1",      "twisted-pair-r3"};
  std::sort(names.begin(), names.end());
  return names;
}

Fixture builtin_fixture(const std::string& name) {
  if (name == "pair-groupoid-r2")
    return pair_groupoid_fixture(name, "pair groupoid of R² with ω_M = (1 + x1²) dx1∧dx2", pair_r2_omega(), false,
                                 FlagExpectations{});
  if (name == "twisted-pair-r3") {
    FlagExpectations e;
    e.over_symplectic = false;
    e.nondegenerate = false;
    return pair_groupoid_fixture(name, "pair groupoid of R³ with a non-closed ω_M and φ = −dω_M", twisted_r3_omega(),
                                 true, e);
  }
  if (name == "nondirac-flow") return nondirac_flow_fixture();
  if (name == "foliation-groupoid") return foliation_groupoid_fixture();
  if (name == "amm-so3") return amm_fixture("so3");
  if (name == "amm-su2") return amm_fixture("su2");
  if (name == "coadjoint-so3") return coadjoint_fixture("so3");
  if (name == "qham-r2-u1") return qham_fixture();
  if (name == "pathspace-pair") return pathspace_fixture();
  if (name == "foliation-classes") return foliation_classes_fixture();
  if (name == "linear-suite") return linear_fixture();
  if (name == "courant-graph") return courant_fixture();
  throw ScenarioError("unknown fixture '" + name + "'", "fixture");
}

Fixture inline_fixture(const json& j, const std::string& location) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw ScenarioError("inline fixture needs a string 'kind'", location);
  std::string kind = j["kind"];
  if (kind == "pair-groupoid") return inline_pair(j, location);
  if (kind == "courant-graph") return inline_courant(j, location);
  if (kind == "foliation") return inline_foliation(j, location);
  throw ScenarioError("unknown inline fixture kind '" + kind + "'", location + ".kind");
}

void apply_expectations(Scenario& s, const json& expectations) {
  if (!expectations.is_object()) throw ScenarioError("expectations must be an object", "expect");
  for (const auto& [key, value] : expectations.items()) {
    if (!value.is_boolean()) throw ScenarioError("expectation must be a boolean", "expect." + key);
    std::string check = key;
    auto colon = key.find(':');
    if (colon != std::string::npos) {
      if (key.substr(0, colon) != s.fixture.name) continue;
      check = key.substr(colon + 1);
    }
    if (!s.fixture.find(check))
      throw ScenarioError("unknown check '" + check + "' for fixture " + s.fixture.name, "expect." + key);
    s.expect[check] = value.get<bool>();
  }
}

Scenario parse_scenario(const json& j) {
  if (!j.is_object()) throw ScenarioError("scenario must be a JSON object", "$");
  if (j.contains("schema") && j["schema"] != kSchemaVersion)
    throw ScenarioError("unsupported schema version", "schema");
  Scenario s;
  if (!j.contains("fixture")) throw ScenarioError("missing 'fixture'", "$");
  const json& f = j["fixture"];
  if (f.is_string())
    s.fixture = builtin_fixture(f.get<std::string>());
  else
    s.fixture = inline_fixture(f, "fixture");
  s.id = j.value("id", s.fixture.name);
  if (j.contains("suite")) {
    if (!j["suite"].is_array()) throw ScenarioError("suite must be an array of check names", "suite");
    for (std::size_t i = 0; i < j["suite"].size(); ++i) {
      const json& c = j["suite"][i];
      std::string where = "suite[" + std::to_string(i) + "]";
      if (!c.is_string()) throw ScenarioError("check name must be a string", where);
      if (!s.fixture.find(c.get<std::string>()))
        throw ScenarioError("unknown check '" + c.get<std::string>() + "' for fixture " + s.fixture.name, where);
      s.suite.push_back(c.get<std::string>());
    }
  }
  if (j.contains("policy")) {
    const json& p = j["policy"];
    if (!p.is_object()) throw ScenarioError("policy must be an object", "policy");
    try {
      if (p.contains("seed")) s.policy.seed = p["seed"].get<std::uint64_t>();
      if (p.contains("samples")) s.policy.samples = p["samples"].get<int>();
      if (p.contains("tol")) s.policy.tol = p["tol"].get<double>();
      if (p.contains("grid")) s.policy.grid = p["grid"].get<std::vector<int>>();
      if (p.contains("fd_step") && !(p["fd_step"].is_string() && p["fd_step"] == "auto"))
        s.policy.fd_step = p["fd_step"].get<double>();
    } catch (const json::exception& e) {
      throw ScenarioError(std::string("bad policy value: ") + e.what(), "policy");
    }
  }
  s.policy.validate();
  if (j.contains("expect")) apply_expectations(s, j["expect"]);
  return s;
}

Scenario builtin_scenario(const std::string& name, const NumericPolicy& policy) {
  Scenario s;
  s.fixture = builtin_fixture(name);
  s.id = name;
  s.policy = policy;
  s.policy.validate();
  return s;
}

Report run_scenario(const Scenario& s) {
  auto start = std::chrono::steady_clock::now();
  std::vector<const CheckSpec*> todo;
  if (s.suite.empty()) {
    for (const auto& c : s.fixture.checks) todo.push_back(&c);
  } else {
    std::set<std::string> seen;
    for (const auto& name : s.suite) {
      const CheckSpec* c = s.fixture.find(name);
      if (!c) throw ScenarioError("unknown check '" + name + "'", "suite");
      if (seen.insert(name).second) todo.push_back(c);
    }
  }
  std::vector<std::future<CheckResult>> futures;
  for (const CheckSpec* c : todo) {
    futures.push_back(std::async(std::launch::async, [c, &s] {
      CheckResult r;
      try {
        r = c->run(s.policy);
      } catch (const std::exception& e) {
        r = result(kInf, 0.0, std::nullopt, std::string("error: ") + e.what());
      }
      r.name = c->name;
      auto it = s.expect.find(c->name);
      r.expected = it != s.expect.end() ? it->second : c->expected;
      r.settle();
      return r;
    }));
  }
  Report rep;
  rep.scenario = s.id;
  rep.fixture = s.fixture.name;
  rep.policy = s.policy;
  for (auto& f : futures) rep.checks.push_back(f.get());
  std::sort(rep.checks.begin(), rep.checks.end(),
            [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });
  rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace dirac
