#pragma once

#include <vector>

#include "dirac/geometry.hpp"
#include "dirac/linear.hpp"
#include "dirac/residual.hpp"

namespace dirac {

struct Section {
  SmoothMap x;
  Form xi;

  int dim() const { return x.in_dim(); }
  PairedVector at(const Vec& p) const;
};

Section make_section(const SmoothMap& x, const Form& xi);

// ([X,Y], L_X η − i_Y dξ + φ(X,Y,·)); an invalid φ means no twist.
Section courant_bracket(const Section& a, const Section& b, const Form& phi = Form());

class FrameError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AlmostDiracField {
  std::vector<Section> frame;

  int dim() const { return frame.empty() ? 0 : frame.front().dim(); }
  Mat span_at(const Vec& p) const;
  // Throws FrameError when the frame is not maximal isotropic at p.
  LinearDirac at(const Vec& p, double tol = kRankTol) const;
};

AlmostDiracField graph_field(const Form& omega);

// Largest |dφ| component over the samples.
double closedness_residual(const Form& phi, const std::vector<Vec>& samples);

Residual integrability_residual(const AlmostDiracField& l, const Form& phi,
                                const std::vector<Vec>& samples, double closed_tol = 1e-10);

struct AnchoredDual {
  int rank = 0;
  std::vector<SmoothMap> anchor;
  std::vector<Form> rho_star;
  // structure[i][j][k] = c^k_{ij}, stored for all i, j.
  std::vector<std::vector<std::vector<Expr>>> structure;

  int dim() const { return anchor.empty() ? 0 : anchor.front().in_dim(); }
  // Σ_k c^k_ij(x) e_k.
  Vec bracket_coeffs(int i, int j, const Vec& x) const;
};

// Zero structure functions for every pair of frame elements.
std::vector<std::vector<std::vector<Expr>>> zero_structure(int rank, int n);

// d_Aρ*(e_i, e_j) as a 1-form, frame elements with constant coefficients.
Form d_a_rho_star(const AnchoredDual& d, int i, int j);

struct ImResiduals {
  Residual r1;
  Residual r2;
};

ImResiduals im_conditions_residual(const AnchoredDual& d, const Form& phi,
                                   const std::vector<Vec>& samples);

}  // namespace dirac
