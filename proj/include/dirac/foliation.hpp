#pragma once

#include <map>
#include <string>
#include <vector>

#include "dirac/groupoid.hpp"

namespace dirac {

class RestrictionMismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LeafwiseClosednessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotSplittingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegreeOverflowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// F = span(∂_1..∂_k) on R^n; ν is carried by the last n − k coordinates.
struct CoordFoliation {
  int n = 0;
  int k = 0;

  CoordFoliation() = default;
  CoordFoliation(int n_, int k_);

  int codim() const { return n - k; }
  Vec leaf_vector(int i) const;    // ∂_{i}, i < k
  Vec normal_vector(int m) const;  // ∂_{k+m}, m < codim
  // Leaf vector in R^k placed in R^n.
  Vec embed(const Vec& v) const;
};

// A foliated p-form, scalar or ν*-valued. Each ν* component (or the single scalar part)
// is stored as an ambient p-form on R^n and is only ever evaluated on leaf vectors;
// ν*-components refer to the Bott-parallel frame dx̄_{k+1}..dx̄_n.
class FoliatedForm {
 public:
  FoliatedForm() = default;
  FoliatedForm(CoordFoliation f, int degree, bool nu_valued, std::vector<Form> parts);

  const CoordFoliation& foliation() const { return fol_; }
  int degree() const { return degree_; }
  bool nu_valued() const { return nu_valued_; }
  const std::vector<Form>& parts() const { return parts_; }
  int width() const { return static_cast<int>(parts_.size()); }

  // Rows: increasing p-subsets of {0..k−1}; columns: parts.
  Mat components(const Vec& x) const;
  Vec eval(const Vec& x, const std::vector<Vec>& leaf_vectors) const;

 private:
  CoordFoliation fol_;
  int degree_ = 0;
  bool nu_valued_ = false;
  std::vector<Form> parts_;
};

// Components keyed by 1-based leaf digit strings, e.g. {"12": "x3"}.
FoliatedForm foliated_from_strings(const CoordFoliation& f, int degree,
                                   const std::map<std::string, std::string>& comps);
// Keyed by the 1-based transverse coordinate index k+1..n.
FoliatedForm foliated_nu_from_strings(const CoordFoliation& f, int degree,
                                      const std::map<int, std::map<std::string, std::string>>& comps);
FoliatedForm restrict_to_leaves(const CoordFoliation& f, const Form& omega);

FoliatedForm d_F(const FoliatedForm& w);
FoliatedForm operator+(const FoliatedForm& a, const FoliatedForm& b);
FoliatedForm operator-(const FoliatedForm& a, const FoliatedForm& b);

// Largest component difference over the samples.
double foliated_distance(const FoliatedForm& a, const FoliatedForm& b, const std::vector<Vec>& samples);
double foliated_norm(const FoliatedForm& a, const std::vector<Vec>& samples);

// ∇_V X̄ = [V, X]‾ as the transverse components of the bracket.
Vec bott_derivative(const CoordFoliation& f, const SmoothMap& v, const SmoothMap& x, const Vec& p);
// Transverse part of [V,[W,X]] − [W,[V,X]] − [[V,W],X] for leafwise V, W.
double bott_curvature_residual(const CoordFoliation& f, const SmoothMap& v, const SmoothMap& w,
                               const SmoothMap& x, const std::vector<Vec>& samples);

// (V_1..V_p) ↦ dθ̃(V_1..V_p, ∂_m) for every transverse m.
FoliatedForm d_nu(const FoliatedForm& theta, const Form& extension, const std::vector<Vec>& samples,
                  double restriction_tol = 1e-12, double closed_tol = 1e-10);

// φ̄(V, W) = φ(V, W, ·) restricted to ν.
FoliatedForm phi_bar(const CoordFoliation& f, const Form& phi);
// Largest |φ(U, V, W)| over leaf triples; zero means φ ∈ F₁.
double leafwise_phi_residual(const CoordFoliation& f, const Form& phi, const std::vector<Vec>& samples);

// σ(∂_i) = (∂_i, i_{∂_i} θ̃).
std::vector<Form> graph_splitting(const CoordFoliation& f, const Form& extension);

struct ClassifyingRep {
  FoliatedForm u;
  // Leafwise part of the brackets; zero when σ lands in L and L is integrable.
  Residual leaf_part;
};

// u_σ(∂_i, ∂_j) = [σ(∂_i), σ(∂_j)] − σ([∂_i, ∂_j]) with the (twisted) Courant bracket.
ClassifyingRep classifying_rep(const CoordFoliation& f, const FoliatedForm& theta,
                               const std::vector<Form>& sigma, const std::vector<Vec>& samples,
                               const Form& phi = Form(), double tol = 1e-10);

// L_F = F ⊕ ν* at any point.
LinearDirac foliation_dirac(const CoordFoliation& f);
AlmostDiracField foliation_dirac_field(const CoordFoliation& f);

// G(F) ⋉ ν* with coordinates (a, b, z, v): t = (a, z), s = (b, z), ω_F = Σ dz_m ∧ dv_m.
std::pair<ChartGroupoid, GroupoidForm> foliation_groupoid(int n, int k);
// G(F) alone, coordinates (a, b, z); the form slot is empty.
ChartGroupoid monodromy_groupoid(int n, int k);

// c_ω(∂_i, ∂_j) = ⟨ρ*_ω(∂_i), ∂_j⟩ at the unit over x, as a k×k matrix.
Mat c_omega(const ChartGroupoid& g, const GroupoidForm& f, int k, const Vec& x,
            double tol = kRankTol);
// max |c_ω − d_F(σ|_F)| over the samples.
double c_omega_exactness_residual(const ChartGroupoid& g, const GroupoidForm& f, int k,
                                  const Form& sigma, const std::vector<Vec>& samples);

}  // namespace dirac
