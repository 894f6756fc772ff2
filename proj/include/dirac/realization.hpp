#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dirac/equivariant.hpp"

namespace dirac {

class NotDiracMapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateRealizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RealizationData {
  Form eta;               // 2-form on P
  SmoothMap mu;           // P → M
  AlmostDiracField target;
  Form phi;               // twist on M; invalid means zero

  int p_dim() const { return eta.dim(); }
};

// X with dμ(X) = w and i_X η = μ*ξ for every frame element (w, ξ) of L_{μ(p)}.
// Throws NotDiracMapError when unsolvable and DegenerateRealizationError when not unique.
std::vector<Vec> solve_action(const RealizationData& r, const Vec& p, double tol = 1e-8);

struct RealizationReport {
  Residual closedness;    // dη + μ*φ
  Residual solve;         // linear-system residual of the action equations
  Residual kernel_map;    // dμ(Ker η) against Ker L
  int unsolvable = 0;
  int degenerate = 0;
  std::optional<Vec> failure_point;
  std::string failure;
  // ρ_P of each frame element, per sample.
  std::vector<std::vector<Vec>> actions;
  double max_action_norm = 0.0;

  bool pass(double tol) const;
};

RealizationReport realization_check(const RealizationData& r, const std::vector<Vec>& samples,
                                    double tol = 1e-8);

struct QuasiHamData {
  MatrixGroup group;
  Form eta;                          // 2-form on P
  SmoothMap mu;                      // P → exponential chart of H
  std::vector<SmoothMap> generators; // ρ_P(e_i)
  BoxSampler points;

  int p_dim() const { return eta.dim(); }
};

struct QuasiHamResiduals {
  Residual r1;           // dη + μ*φ
  Residual r2;           // i_{ρ_P(v)}η − ½μ*(λ+λ̄, v)
  Residual r3;           // Ker η against ρ_P(Ker(Ad_μ + 1))
  Residual invariance;   // L_{ρ_P(v)} η
  Residual equivariance; // dμ(ρ_P(v)) − ρ_H(v)
  std::vector<RankDiagnostic> rank_diagnostics;
  bool rank_unstable = false;
};

QuasiHamResiduals quasi_ham_check(const QuasiHamData& q, const std::vector<Vec>& samples,
                                  double tol = kRankTol);

struct CrosscheckReport {
  RealizationReport realization;
  Residual generators;  // reconstructed ρ_P against the given generators
};

CrosscheckReport equivalence_crosscheck(const QuasiHamData& q, const std::vector<Vec>& samples,
                                        double tol = 1e-8);

// A groupoid action along μ, parametrized so that s(g) = μ(p) holds identically.
struct GroupoidActionData {
  SmoothMap fibered;  // params → (arrow in R^N, point in R^p)
  SmoothMap act;      // R^{N+p} → R^p
  BoxSampler params;
};

// m_P*η − pr_G*ω − pr_P*η on the fibered product.
Residual action_compatibility_residual(const ChartGroupoid& g, const GroupoidForm& f,
                                       const Form& eta, const GroupoidActionData& a,
                                       const std::vector<Vec>& params);

// Pair groupoid of (M, ω_M) acting on P = M along μ = id.
GroupoidActionData pair_self_action(const ChartGroupoid& g);

// R² with η = dx∧dy, ρ_P = (y, −x) and μ = factor·(x²+y²) into the U(1) chart.
QuasiHamData rotation_plane_qham(double factor = 0.5);

// (M, ω_M) → (M, L_ω) through the identity map.
RealizationData identity_realization(const Form& omega_m);

}  // namespace dirac
