#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dirac/courant.hpp"

namespace dirac {

// Uniform draws in a parameter box pushed through a smooth map.
struct BoxSampler {
  SmoothMap map;
  Vec lo;
  Vec hi;

  int param_dim() const { return static_cast<int>(lo.size()); }
  Vec param(SampleRng& rng) const { return rng.uniform_box(lo, hi); }
  Vec draw(SampleRng& rng) const { return map(param(rng)); }
};

BoxSampler box_sampler(const Vec& lo, const Vec& hi);

struct ChartGroupoid {
  std::string name;
  int total_dim = 0;
  int base_dim = 0;
  SmoothMap s;
  SmoothMap t;
  SmoothMap unit;
  SmoothMap inverse;
  SmoothMap mult;        // R^{2N} → R^N on composable pairs (g, h), s(g) = t(h)
  BoxSampler pairs;      // → R^{2N}
  BoxSampler triples;    // → R^{3N}
  BoxSampler arrows;     // → R^N
  BoxSampler bases;      // → R^n
  std::vector<Vec> probe_arrows;
  // Basis of A_x = Ker(ds) at ε(x), as columns in R^N; null-space basis when unset.
  std::function<Mat(const Vec&)> algebroid_basis;
};

struct GroupoidForm {
  Form omega;  // 2-form on the total chart
  Form phi;    // closed 3-form on the base chart; invalid means zero
  Form orbit;  // optional θ_S with ω = t*θ_S − s*θ_S on transitive fixtures
};

struct SamplePolicy {
  std::uint64_t seed = 42;
  int samples = 64;
  double tol = kRankTol;
};

// Samples drawn sequentially from the seed.
struct GroupoidSamples {
  std::vector<Vec> pair_params;
  std::vector<Vec> triple_params;
  std::vector<Vec> arrows;  // random arrows followed by probe arrows
  std::vector<Vec> bases;
};

GroupoidSamples draw_samples(const ChartGroupoid& g, const SamplePolicy& policy);

// Jᵀ Ω(f(x)) J for a 2-form.
Mat pullback_matrix(const SmoothMap& f, const Form& omega, const Vec& x);

struct StructuralResiduals {
  Residual unit_source_target;
  Residual source_target_mult;
  Residual associativity;
  Residual inverse;
};

StructuralResiduals check_structure(const ChartGroupoid& g, const GroupoidSamples& smp);

Residual check_multiplicative(const ChartGroupoid& g, const GroupoidForm& f,
                              const GroupoidSamples& smp);
Residual check_rel_closed(const ChartGroupoid& g, const GroupoidForm& f, const GroupoidSamples& smp);

struct UnitIdentityResiduals {
  Residual eps;
  Residual inv;
};
UnitIdentityResiduals check_unit_identities(const ChartGroupoid& g, const GroupoidForm& f,
                                            const GroupoidSamples& smp);

// Ker(ds) + Ker(ω) ⊂ Ker(dt)^⊥ at every sampled arrow.
Residual check_kernel_orthogonality(const ChartGroupoid& g, const GroupoidForm& f,
                                    const GroupoidSamples& smp, double tol = kRankTol);

Residual check_orbit_form(const ChartGroupoid& g, const GroupoidForm& f, const GroupoidSamples& smp);

class RankDefectError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RhoStar {
  Mat basis;     // N×r basis of A_x
  Mat rho;       // n×r, ρ(α_a) as columns
  Mat rho_star;  // n×r, ρ*(α_a) as columns
};

RhoStar extract_rho_star(const ChartGroupoid& g, const GroupoidForm& f, const Vec& x,
                         double tol = kRankTol);

// ω at the unit against ρ*(α)(Y) − ρ*(β)(X) + ⟨ρ*(α), ρ(β)⟩ in the splitting T_xG ≅ T_xM ⊕ A_x.
double unit_decomposition_residual(const ChartGroupoid& g, const GroupoidForm& f, const Vec& x);

class NonDiracPointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

LinearDirac induced_dirac(const ChartGroupoid& g, const GroupoidForm& f, const Vec& x,
                          double tol = kRankTol);
// t_*(L_{ω,g}) at the arrow g.
LinearDirac pushed_dirac(const ChartGroupoid& g, const GroupoidForm& f, const Vec& arrow,
                         double tol = kRankTol);

struct UnitDims {
  Vec x;
  int ker = 0;        // dim Ker(ω_x)
  int ker_tm = 0;     // dim Ker(ω_x) ∩ T_xM
  int ker_ds = 0;     // dim Ker(ω_x) ∩ Ker(ds)_x
  int isotropy = 0;   // dim 𝔤_x(ω)
};

struct ClassificationReport {
  std::vector<UnitDims> units;
  std::map<std::string, Residual> residuals;
  std::map<std::string, bool> flags;
  std::vector<RankDiagnostic> rank_diagnostics;
  bool indeterminate = false;
  std::optional<Vec> dirac_type_witness;
  int dirac_type_violations = 0;
};

ClassificationReport classify(const ChartGroupoid& g, const GroupoidForm& f,
                              const SamplePolicy& policy, double residual_tol = 1e-8);

nlohmann::json to_json(const ClassificationReport& r);

GroupoidForm gauge(const ChartGroupoid& g, const GroupoidForm& f, const Form& b);

// M×M with t = pr1, s = pr2 and ω = pr1*ω_M − pr2*ω_M; φ should equal −dω_M.
std::pair<ChartGroupoid, GroupoidForm> pair_groupoid(const Form& omega_m, const Form& phi,
                                                     const Vec& lo, const Vec& hi);

// Flow groupoid R×R² of the rotation field x∂y − y∂x with ω = t*θ − s*θ, θ = y dx∧dy.
std::pair<ChartGroupoid, GroupoidForm> rotation_flow_groupoid();

}  // namespace dirac
