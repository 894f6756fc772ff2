#include "dirac/courant.hpp"

namespace dirac {

PairedVector Section::at(const Vec& p) const { return {x(p), covector(xi, p)}; }

Section make_section(const SmoothMap& x, const Form& xi) {
  if (xi.degree() != 1 || x.in_dim() != xi.dim() || x.out_dim() != x.in_dim())
    throw std::invalid_argument("section: chart mismatch");
  return {x, xi};
}

Section courant_bracket(const Section& a, const Section& b, const Form& phi) {
  if (a.dim() != b.dim()) throw std::invalid_argument("courant_bracket: chart mismatch");
  Form xi = lie_derivative(a.x, b.xi) - interior(b.x, ext_d(a.xi));
  if (phi.valid()) {
    if (phi.degree() != 3 || phi.dim() != a.dim())
      throw std::invalid_argument("courant_bracket: twist must be a 3-form on the same chart");
    xi = xi + interior(b.x, interior(a.x, phi));
  }
  return {lie_bracket(a.x, b.x), xi};
}

Mat AlmostDiracField::span_at(const Vec& p) const {
  const int n = dim();
  Mat span(2 * n, frame.size());
  for (std::size_t c = 0; c < frame.size(); ++c) {
    PairedVector v = frame[c].at(p);
    span.col(c) << v.x, v.xi;
  }
  return span;
}

LinearDirac AlmostDiracField::at(const Vec& p, double tol) const {
  if (static_cast<int>(frame.size()) != dim())
    throw FrameError("almost-Dirac frame must have exactly n sections");
  try {
    return LinearDirac::from_span(span_at(p), tol);
  } catch (const NotDiracError& e) {
    throw FrameError(std::string("frame is not a Dirac structure at ") + format_point(p) + ": " +
                     e.what());
  }
}

AlmostDiracField graph_field(const Form& omega) {
  const int n = omega.dim();
  AlmostDiracField l;
  for (int i = 0; i < n; ++i) {
    SmoothMap e = constant_field(n, Vec::Unit(n, i));
    l.frame.push_back({e, interior(e, omega)});
  }
  return l;
}

double closedness_residual(const Form& phi, const std::vector<Vec>& samples) {
  if (phi.degree() + 1 > kMaxFormDegree || phi.degree() + 1 > phi.dim()) return 0.0;
  Form d = ext_d(phi);
  double worst = 0.0;
  for (const auto& p : samples) worst = std::max(worst, form_components(d, p).lpNorm<Eigen::Infinity>());
  return worst;
}

Residual integrability_residual(const AlmostDiracField& l, const Form& phi,
                                const std::vector<Vec>& samples, double closed_tol) {
  if (phi.valid() && closedness_residual(phi, samples) > closed_tol)
    throw std::invalid_argument("twisting 3-form is not closed at the samples");
  const int n = l.dim();
  std::vector<std::vector<Section>> brackets(n, std::vector<Section>(n));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) brackets[i][j] = courant_bracket(l.frame[i], l.frame[j], phi);
  Residual res;
  for (const auto& p : samples) {
    l.at(p);
    std::vector<PairedVector> frame_at;
    for (const auto& s : l.frame) frame_at.push_back(s.at(p));
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        PairedVector b = brackets[i][j].at(p);
        for (const auto& f : frame_at) worst = std::max(worst, std::abs(pairing(b, f)));
      }
    res.update(worst, p);
  }
  return res;
}

Vec AnchoredDual::bracket_coeffs(int i, int j, const Vec& x) const {
  Vec out(rank);
  for (int k = 0; k < rank; ++k) out[k] = structure[i][j][k].eval(x);
  return out;
}

std::vector<std::vector<std::vector<Expr>>> zero_structure(int rank, int n) {
  Expr zero = Expr::constant(0.0, default_variables(n));
  return std::vector<std::vector<std::vector<Expr>>>(
      rank, std::vector<std::vector<Expr>>(rank, std::vector<Expr>(rank, zero)));
}

Form d_a_rho_star(const AnchoredDual& d, int i, int j) {
  const int n = d.dim();
  const int r = d.rank;
  auto cij = d.structure[i][j];
  auto rs = d.rho_star;
  Form bracket_term = make_form(n, 1, [cij, rs, r](const auto& x, auto vs) {
    using T = scalar_of<decltype(x)>;
    T acc(0.0);
    for (int k = 0; k < r; ++k) acc = acc + cij[k].eval(x) * rs[k](x, vs);
    return acc;
  });
  return bracket_term - lie_derivative(d.anchor[i], d.rho_star[j]) +
         lie_derivative(d.anchor[j], d.rho_star[i]) + ext_d(pair(d.rho_star[j], d.anchor[i]));
}

ImResiduals im_conditions_residual(const AnchoredDual& d, const Form& phi,
                                   const std::vector<Vec>& samples) {
  const int r = d.rank;
  std::vector<std::vector<Form>> lhs(r, std::vector<Form>(r));
  for (int i = 0; i < r; ++i)
    for (int j = i + 1; j < r; ++j) lhs[i][j] = d_a_rho_star(d, i, j);
  ImResiduals out;
  for (const auto& p : samples) {
    std::vector<Vec> rho, rs;
    for (int i = 0; i < r; ++i) {
      rho.push_back(d.anchor[i](p));
      rs.push_back(covector(d.rho_star[i], p));
    }
    double w1 = 0.0, w2 = 0.0;
    for (int i = 0; i < r; ++i)
      for (int j = i; j < r; ++j) {
        w1 = std::max(w1, std::abs(rs[i].dot(rho[j]) + rs[j].dot(rho[i])));
        if (j == i) continue;
        Vec v = covector(lhs[i][j], p);
        if (phi.valid()) v -= contract_two(phi, p, rho[i], rho[j]);
        w2 = std::max(w2, v.lpNorm<Eigen::Infinity>());
      }
    out.r1.update(w1, p);
    out.r2.update(w2, p);
  }
  return out;
}

}  // namespace dirac
