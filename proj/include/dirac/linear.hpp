#pragma once

#include <stdexcept>

#include <json.hpp>

#include "dirac/numerics.hpp"

namespace dirac {

struct PairedVector {
  Vec x;
  Vec xi;
};

double pairing(const PairedVector& a, const PairedVector& b);

// Symmetric matrix of the pairing on V⊕V*, ordered (x, xi).
Mat pairing_matrix(int n);

class NotDiracError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegeneratePushForward : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonSmoothPullBack : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Maximal isotropic subspace of V⊕V*, stored through a canonical 2n×n basis:
// orthonormal column span followed by reduced row echelon form of its transpose.
class LinearDirac {
 public:
  LinearDirac() = default;

  // Any 2n×k spanning set; throws NotDiracError unless the span is isotropic of rank n.
  static LinearDirac from_span(const Mat& span, double tol = kRankTol, double iso_tol = 1e-8);

  int dim() const { return n_; }
  double tol() const { return tol_; }
  const Mat& canonical() const { return canonical_; }
  const Mat& basis() const { return basis_; }
  Mat x_block() const { return basis_.topRows(n_); }
  Mat xi_block() const { return basis_.bottomRows(n_); }

  double isotropy_defect() const;
  bool contains(const PairedVector& v, double tol = 1e-8) const;

  friend bool operator==(const LinearDirac& a, const LinearDirac& b);
  friend bool operator!=(const LinearDirac& a, const LinearDirac& b) { return !(a == b); }

 private:
  int n_ = 0;
  double tol_ = kRankTol;
  Mat basis_;
  Mat canonical_;
};

double span_distance(const LinearDirac& a, const LinearDirac& b);

LinearDirac from_form(const Mat& theta, double tol = kRankTol);
LinearDirac from_bivector(const Mat& pi, double tol = kRankTol);

struct InducedData {
  Mat range;          // n×r orthonormal basis of pr1(L)
  Mat kernel;         // n×q orthonormal basis of {v : (v,0) ∈ L}
  Mat theta;          // r×r, θ_L in the range basis
  Mat theta_ambient;  // n×n, range·θ·rangeᵀ
  Mat covectors;      // n×p orthonormal basis of pr2(L)
  Mat pi;             // p×p, π_L in the covector basis
  Mat pi_ambient;     // n×n
};

InducedData induced(const LinearDirac& l);

// psi: W×V matrix of a map V → W.
LinearDirac push_forward(const Mat& psi, const LinearDirac& l);
// f: W×V matrix of a map V → W, l a Dirac structure on W.
LinearDirac pull_back(const Mat& f, const LinearDirac& l);
bool is_dirac_map(const Mat& psi, const LinearDirac& lv, const LinearDirac& lw);

// Gauge transformation (x, ξ) ↦ (x, ξ + B(x, ·)).
LinearDirac gauge_transform(const LinearDirac& l, const Mat& b);

// Identification V ≅ V* through an inner-product matrix.
Vec lower(const Mat& metric, const Vec& v);
Vec raise(const Mat& metric, const Vec& xi);

nlohmann::json to_json(const LinearDirac& l);
LinearDirac linear_dirac_from_json(const nlohmann::json& j);

}  // namespace dirac
