#pragma once

#include <functional>
#include <vector>

#include "dirac/courant.hpp"

namespace dirac {

// Algebroid presented by a frame: anchor ρ(e_i), structure functions c^k_ij and ρ*(e_i).
using AlgebroidPresentation = AnchoredDual;

// A = TM on R^n with the coordinate frame and ρ*(X) = i_X ω_M.
AlgebroidPresentation tangent_algebroid(const Form& omega_m);

// Σ_k c^k_ij ρ(e_k) − [ρ(e_i), ρ(e_j)] at the samples.
double anchor_bracket_residual(const AlgebroidPresentation& alg, const std::vector<Vec>& samples);

struct DiscretizedAPath {
  std::vector<Vec> gamma;  // γ(t_i), i = 0..N
  std::vector<Vec> a;      // a(t_i)

  int intervals() const { return static_cast<int>(gamma.size()) - 1; }
  double dt() const { return 1.0 / intervals(); }
  double time(int i) const { return static_cast<double>(i) / intervals(); }
};

struct PathTangent {
  std::vector<Vec> dgamma;
  std::vector<Vec> da;
};

std::vector<double> trapezoid_weights(int intervals);

// Samples γ: R → R^n and a: R → R^r on the uniform grid.
DiscretizedAPath sample_path(const SmoothMap& gamma, const SmoothMap& a, int intervals);
// A = TM: a = dγ/dt at the nodes.
DiscretizedAPath tangent_path(const SmoothMap& gamma, int intervals);

// max_i |ρ(a_i) − (γ_{i+1} − γ_{i−1}) / 2Δt| over interior nodes.
double a_path_residual(const AlgebroidPresentation& alg, const DiscretizedAPath& path);

// Tangent to P(TM): dγ = X′(t_i), da = dX′/dt(t_i).
PathTangent tangent_probe(const DiscretizedAPath& path, const SmoothMap& x_prime);

PathTangent scaled(const PathTangent& v, double c);
DiscretizedAPath shifted(const DiscretizedAPath& path, const PathTangent& v, double h);

// η_t(x) = χ(t)·e(t, x) with χ(t) = t(1 − t), so η vanishes at both ends.
struct GaugeParameter {
  SmoothMap profile;  // R^{1+n} → R^r, (t, x) ↦ e(t, x)

  SmoothMap section() const;
};

double omega_phi(const AlgebroidPresentation& alg, const DiscretizedAPath& path, const PathTangent& v,
                 const PathTangent& w, const Form& phi);
double sigma_tilde(const AlgebroidPresentation& alg, const DiscretizedAPath& path, const PathTangent& x);

// 1e-4 (1 + max |γ|, |a|).
double fd_step(const DiscretizedAPath& path);

// −dσ̃(V, W) by central differences with constant extensions.
double omega_tilde(const AlgebroidPresentation& alg, const DiscretizedAPath& path, const PathTangent& v,
                   const PathTangent& w, double h);

// First-order gauge vector X_η. The section extension is ξ₀(t, x) = a(t) + B (x − γ(t));
// an empty B means the constant extension.
PathTangent gauge_vector(const AlgebroidPresentation& alg, const DiscretizedAPath& path,
                         const GaugeParameter& eta, const Mat& extension = Mat());

struct BasicnessReport {
  double basicness = 0.0;          // max |ω̃(X_η, X) + ω_φ(X_η, X)|
  double lemma52 = 0.0;            // ω_φ(X_η, X) − ∫ φ(ρa, ρη, dγX)
  double sigma_contraction = 0.0;  // σ̃(X_η) + ∫ ⟨ρ*η, ρa⟩
};

BasicnessReport basicness_residual(const AlgebroidPresentation& alg, const DiscretizedAPath& path,
                                   const GaugeParameter& eta, const Form& phi,
                                   const std::vector<PathTangent>& probes, double h);

// L_{X′}(∫⟨u, γ̇⟩) + ∫⟨i_γ̇ du + ∂_t u, X′⟩ − ⟨u, X′⟩|₀¹, with u: R^{1+n} → R^n.
double path_boundary_identity_residual(const SmoothMap& gamma, const SmoothMap& x_prime,
                                       const SmoothMap& u, int intervals, double h);

// (ω̃ + ω_φ)(V, W) + ω_M(V′(1), W′(1)) − ω_M(V′(0), W′(0)) for A = TM.
double endpoint_residual(const AlgebroidPresentation& alg, const DiscretizedAPath& path,
                         const Form& phi, const Form& omega_m, const std::vector<PathTangent>& probes,
                         double h);

// dω_φ(U, V, W) − (t*φ − s*φ)(U, V, W) by nested central differences.
double path_rel_closed_residual(const AlgebroidPresentation& alg, const DiscretizedAPath& path,
                                const Form& phi, const std::vector<PathTangent>& probes, double h);

struct Convergence {
  std::vector<int> grids;
  std::vector<double> residuals;
  double order = 0.0;  // least-squares slope of −log r against log N
  bool monotone = false;
};

Convergence convergence_study(const std::function<double(int)>& residual, const std::vector<int>& grids);

}  // namespace dirac
