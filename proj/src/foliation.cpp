#include "dirac/foliation.hpp"

#include <cmath>

namespace dirac {

namespace {

void require_same(const CoordFoliation& a, const CoordFoliation& b) {
  if (a.n != b.n || a.k != b.k) throw std::invalid_argument("foliated forms on different foliations");
}

std::vector<std::vector<int>> leaf_digits(const CoordFoliation& f, int degree,
                                          const std::map<std::string, std::string>& comps) {
  std::vector<std::vector<int>> out;
  for (const auto& [key, src] : comps) {
    std::vector<int> idx;
    for (char ch : key) {
      int i = ch - '1';
      if (i < 0 || i >= f.k)
        throw std::invalid_argument("foliated component '" + key + "' uses a non-leaf direction");
      idx.push_back(i);
    }
    if (static_cast<int>(idx.size()) != degree)
      throw std::invalid_argument("foliated component '" + key + "' has wrong degree");
    out.push_back(idx);
  }
  return out;
}

Form leaf_part(const CoordFoliation& f, int degree, const std::map<std::string, std::string>& comps) {
  leaf_digits(f, degree, comps);
  return form_from_strings(Chart(f.n), degree, comps);
}

}  // namespace

CoordFoliation::CoordFoliation(int n_, int k_) : n(n_), k(k_) {
  if (n < 1 || k < 0 || k > n) throw std::invalid_argument("foliation needs 0 <= k <= n and n >= 1");
}

Vec CoordFoliation::leaf_vector(int i) const { return Vec::Unit(n, i); }
Vec CoordFoliation::normal_vector(int m) const { return Vec::Unit(n, k + m); }

Vec CoordFoliation::embed(const Vec& v) const {
  if (v.size() != k) throw std::invalid_argument("leaf vector has wrong size");
  Vec out = Vec::Zero(n);
  out.head(k) = v;
  return out;
}

FoliatedForm::FoliatedForm(CoordFoliation f, int degree, bool nu_valued, std::vector<Form> parts)
    : fol_(f), degree_(degree), nu_valued_(nu_valued), parts_(std::move(parts)) {
  if (degree < 0 || degree > f.k) throw DegreeOverflowError("foliated degree exceeds leaf dimension");
  const std::size_t want = nu_valued ? static_cast<std::size_t>(f.codim()) : 1;
  if (parts_.size() != want) throw std::invalid_argument("foliated form has the wrong number of parts");
  for (const auto& p : parts_)
    if (p.dim() != f.n || p.degree() != degree)
      throw std::invalid_argument("foliated part has the wrong chart or degree");
}

Mat FoliatedForm::components(const Vec& x) const {
  auto subsets = multi_indices(fol_.k, degree_);
  Mat out(subsets.size(), parts_.size());
  for (std::size_t r = 0; r < subsets.size(); ++r) {
    std::vector<Vec> vs;
    for (int i : subsets[r]) vs.push_back(fol_.leaf_vector(i));
    for (std::size_t c = 0; c < parts_.size(); ++c) out(r, c) = parts_[c].at(x, vs);
  }
  return out;
}

Vec FoliatedForm::eval(const Vec& x, const std::vector<Vec>& leaf_vectors) const {
  if (static_cast<int>(leaf_vectors.size()) != degree_) throw std::invalid_argument("foliated arity");
  std::vector<Vec> vs;
  for (const auto& v : leaf_vectors) vs.push_back(fol_.embed(v));
  Vec out(parts_.size());
  for (std::size_t c = 0; c < parts_.size(); ++c) out[c] = parts_[c].at(x, vs);
  return out;
}

FoliatedForm foliated_from_strings(const CoordFoliation& f, int degree,
                                   const std::map<std::string, std::string>& comps) {
  return FoliatedForm(f, degree, false, {leaf_part(f, degree, comps)});
}

FoliatedForm foliated_nu_from_strings(const CoordFoliation& f, int degree,
                                      const std::map<int, std::map<std::string, std::string>>& comps) {
  std::vector<Form> parts;
  for (int m = 0; m < f.codim(); ++m) {
    auto it = comps.find(f.k + m + 1);
    parts.push_back(it == comps.end() ? zero_form(f.n, degree) : leaf_part(f, degree, it->second));
  }
  for (const auto& [m, _] : comps)
    if (m <= f.k || m > f.n) throw std::invalid_argument("ν* index " + std::to_string(m) + " is not transverse");
  return FoliatedForm(f, degree, true, parts);
}

FoliatedForm restrict_to_leaves(const CoordFoliation& f, const Form& omega) {
  return FoliatedForm(f, omega.degree(), false, {omega});
}

FoliatedForm d_F(const FoliatedForm& w) {
  if (w.degree() + 1 > w.foliation().k)
    throw DegreeOverflowError("d_F of a degree-" + std::to_string(w.degree()) + " form on a rank-" +
                              std::to_string(w.foliation().k) + " foliation");
  std::vector<Form> parts;
  for (const auto& p : w.parts()) parts.push_back(ext_d(p));
  return FoliatedForm(w.foliation(), w.degree() + 1, w.nu_valued(), parts);
}

FoliatedForm operator+(const FoliatedForm& a, const FoliatedForm& b) {
  require_same(a.foliation(), b.foliation());
  if (a.degree() != b.degree() || a.nu_valued() != b.nu_valued())
    throw std::invalid_argument("adding foliated forms of different type");
  std::vector<Form> parts;
  for (int c = 0; c < a.width(); ++c) parts.push_back(a.parts()[c] + b.parts()[c]);
  return FoliatedForm(a.foliation(), a.degree(), a.nu_valued(), parts);
}

FoliatedForm operator-(const FoliatedForm& a, const FoliatedForm& b) {
  std::vector<Form> neg;
  for (const auto& p : b.parts()) neg.push_back((-1.0) * p);
  return a + FoliatedForm(b.foliation(), b.degree(), b.nu_valued(), neg);
}

double foliated_distance(const FoliatedForm& a, const FoliatedForm& b, const std::vector<Vec>& samples) {
  require_same(a.foliation(), b.foliation());
  double worst = 0.0;
  for (const auto& x : samples) worst = std::max(worst, max_abs(a.components(x) - b.components(x)));
  return worst;
}

double foliated_norm(const FoliatedForm& a, const std::vector<Vec>& samples) {
  double worst = 0.0;
  for (const auto& x : samples) worst = std::max(worst, max_abs(a.components(x)));
  return worst;
}

Vec bott_derivative(const CoordFoliation& f, const SmoothMap& v, const SmoothMap& x, const Vec& p) {
  return lie_bracket(v, x)(p).tail(f.codim());
}

double bott_curvature_residual(const CoordFoliation& f, const SmoothMap& v, const SmoothMap& w,
                               const SmoothMap& x, const std::vector<Vec>& samples) {
  SmoothMap vwx = lie_bracket(v, lie_bracket(w, x));
  SmoothMap wvx = lie_bracket(w, lie_bracket(v, x));
  SmoothMap vw_x = lie_bracket(lie_bracket(v, w), x);
  double worst = 0.0;
  for (const auto& p : samples) {
    Vec leak = v(p).tail(f.codim());
    leak = leak.cwiseAbs().cwiseMax(w(p).tail(f.codim()).cwiseAbs());
    if (leak.size() > 0 && leak.maxCoeff() > 1e-12)
      throw std::invalid_argument("Bott curvature needs leafwise fields");
    Vec r = vwx(p) - wvx(p) - vw_x(p);
    if (f.codim() > 0) worst = std::max(worst, r.tail(f.codim()).lpNorm<Eigen::Infinity>());
  }
  return worst;
}

FoliatedForm d_nu(const FoliatedForm& theta, const Form& extension, const std::vector<Vec>& samples,
                  double restriction_tol, double closed_tol) {
  const CoordFoliation& f = theta.foliation();
  if (theta.nu_valued()) throw std::invalid_argument("d_nu takes a scalar foliated form");
  if (extension.dim() != f.n || extension.degree() != theta.degree())
    throw std::invalid_argument("extension has the wrong chart or degree");
  FoliatedForm ext = restrict_to_leaves(f, extension);
  for (const auto& x : samples) {
    Mat a = theta.components(x);
    double err = max_abs(a - ext.components(x));
    if (err > restriction_tol * std::max(1.0, max_abs(a)))
      throw RestrictionMismatchError("extension does not restrict to θ at " + format_point(x));
  }
  Form dtheta = ext_d(extension);
  if (theta.degree() + 1 <= f.k) {
    FoliatedForm dl = restrict_to_leaves(f, dtheta);
    for (const auto& x : samples)
      if (max_abs(dl.components(x)) > closed_tol)
        throw LeafwiseClosednessError("θ is not leafwise closed at " + format_point(x));
  }
  // dθ̃(V_1..V_p, ∂_m) = (−1)^p (i_{∂_m} dθ̃)(V_1..V_p).
  const double sign = theta.degree() % 2 == 0 ? 1.0 : -1.0;
  std::vector<Form> parts;
  for (int m = 0; m < f.codim(); ++m)
    parts.push_back(sign * interior(constant_field(f.n, f.normal_vector(m)), dtheta));
  return FoliatedForm(f, theta.degree(), true, parts);
}

FoliatedForm phi_bar(const CoordFoliation& f, const Form& phi) {
  if (phi.dim() != f.n || phi.degree() != 3) throw std::invalid_argument("φ̄ needs a 3-form on the chart");
  std::vector<Form> parts;
  for (int m = 0; m < f.codim(); ++m)
    parts.push_back(interior(constant_field(f.n, f.normal_vector(m)), phi));
  return FoliatedForm(f, 2, true, parts);
}

double leafwise_phi_residual(const CoordFoliation& f, const Form& phi, const std::vector<Vec>& samples) {
  if (f.k < 3) return 0.0;
  return foliated_norm(restrict_to_leaves(f, phi), samples);
}

std::vector<Form> graph_splitting(const CoordFoliation& f, const Form& extension) {
  std::vector<Form> out;
  for (int i = 0; i < f.k; ++i) out.push_back(interior(constant_field(f.n, f.leaf_vector(i)), extension));
  return out;
}

ClassifyingRep classifying_rep(const CoordFoliation& f, const FoliatedForm& theta,
                               const std::vector<Form>& sigma, const std::vector<Vec>& samples,
                               const Form& phi, double tol) {
  require_same(f, theta.foliation());
  if (theta.degree() != 2 || theta.nu_valued()) throw std::invalid_argument("θ must be a scalar foliated 2-form");
  if (static_cast<int>(sigma.size()) != f.k) throw NotSplittingError("σ needs one covector per leaf direction");
  for (const auto& s : sigma)
    if (s.dim() != f.n || s.degree() != 1) throw NotSplittingError("σ components must be 1-forms on the chart");

  // σ(∂_i) lies over ∂_i by construction; it lies in L iff σ(∂_i)|_F = θ(∂_i, ·).
  for (const auto& x : samples) {
    for (int i = 0; i < f.k; ++i)
      for (int j = 0; j < f.k; ++j) {
        double want = theta.parts()[0].at(x, {f.leaf_vector(i), f.leaf_vector(j)});
        double got = sigma[i].at(x, {f.leaf_vector(j)});
        if (std::abs(got - want) > tol * std::max(1.0, std::abs(want)))
          throw NotSplittingError("σ(∂" + std::to_string(i + 1) + ") is not in L at " + format_point(x));
      }
  }

  std::vector<Section> lifted;
  for (int i = 0; i < f.k; ++i) lifted.push_back(make_section(constant_field(f.n, f.leaf_vector(i)), sigma[i]));
  // c[i][j][m] = ⟨[σ∂_i, σ∂_j], ∂_{k+m}⟩ as functions.
  std::vector<std::vector<Form>> brackets(f.k, std::vector<Form>(f.k));
  for (int i = 0; i < f.k; ++i)
    for (int j = i + 1; j < f.k; ++j) brackets[i][j] = courant_bracket(lifted[i], lifted[j], phi).xi;

  ClassifyingRep out;
  for (const auto& x : samples) {
    double worst = 0.0;
    for (int i = 0; i < f.k; ++i)
      for (int j = i + 1; j < f.k; ++j) {
        Vec c = covector(brackets[i][j], x);
        if (f.k > 0) worst = std::max(worst, c.head(f.k).lpNorm<Eigen::Infinity>());
      }
    out.leaf_part.update(worst, x);
  }

  std::vector<Form> parts;
  const int k = f.k;
  for (int m = 0; m < f.codim(); ++m) {
    std::vector<std::vector<Form>> coeff(k, std::vector<Form>(k));
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j)
        coeff[i][j] = pair(brackets[i][j], constant_field(f.n, f.normal_vector(m)));
    parts.push_back(make_form(f.n, 2, [k, coeff](const auto& x, auto vs) {
      using T = scalar_of<decltype(x)>;
      T acc(0.0);
      const std::span<const VecX<T>> none;
      for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
          acc = acc + coeff[i][j](x, none) * (vs[0][i] * vs[1][j] - vs[0][j] * vs[1][i]);
      return acc;
    }));
  }
  out.u = FoliatedForm(f, 2, true, parts);
  return out;
}

LinearDirac foliation_dirac(const CoordFoliation& f) {
  Mat span = Mat::Zero(2 * f.n, f.n);
  for (int i = 0; i < f.n; ++i) span(i < f.k ? i : f.n + i, i) = 1.0;
  return LinearDirac::from_span(span);
}

AlmostDiracField foliation_dirac_field(const CoordFoliation& f) {
  AlmostDiracField l;
  for (int i = 0; i < f.n; ++i) {
    if (i < f.k)
      l.frame.push_back(make_section(constant_field(f.n, f.leaf_vector(i)), zero_form(f.n, 1)));
    else
      l.frame.push_back(make_section(constant_field(f.n, Vec::Zero(f.n)), constant_covector(Vec::Unit(f.n, i))));
  }
  return l;
}

namespace {

// Arrows (a, b, z[, v]) with a, b ∈ R^k, z ∈ R^q and optionally v ∈ ν*_{s} ≅ R^q.
ChartGroupoid leafwise_pair_groupoid(int n, int k, bool with_nu) {
  const int q = n - k;
  const int r = with_nu ? q : 0;
  const int N = 2 * k + q + r;
  ChartGroupoid g;
  g.name = with_nu ? "foliation-semidirect" : "foliation-monodromy";
  g.total_dim = N;
  g.base_dim = n;
  g.t = make_map(N, n, [k, q](const auto& a) {
    using T = scalar_of<decltype(a)>;
    VecX<T> out(k + q);
    out << a.head(k), a.segment(2 * k, q);
    return out;
  });
  g.s = make_map(N, n, [k, q](const auto& a) {
    using T = scalar_of<decltype(a)>;
    VecX<T> out(k + q);
    out << a.segment(k, k), a.segment(2 * k, q);
    return out;
  });
  g.unit = make_map(n, N, [k, q, r, N](const auto& x) {
    using T = scalar_of<decltype(x)>;
    VecX<T> out = VecX<T>::Zero(N);
    out.head(k) = x.head(k);
    out.segment(k, k) = x.head(k);
    out.segment(2 * k, q) = x.tail(q);
    (void)r;
    return out;
  });
  g.inverse = make_map(N, N, [k, q, r, N](const auto& a) {
    using T = scalar_of<decltype(a)>;
    VecX<T> out(N);
    out << a.segment(k, k), a.head(k), a.segment(2 * k, q), VecX<T>(-a.tail(r));
    return out;
  });
  // (g, v)(h, w) = (gh, h⁻¹v + w); the holonomy h⁻¹ acts trivially on planar leaves.
  g.mult = make_map(2 * N, N, [k, q, r, N](const auto& p) {
    using T = scalar_of<decltype(p)>;
    VecX<T> gv = p.head(N);
    VecX<T> hw = p.tail(N);
    VecX<T> moved = gv.tail(r);
    VecX<T> out(N);
    out << gv.head(k), hw.segment(k, k), hw.segment(2 * k, q), VecX<T>(moved + hw.tail(r));
    return out;
  });
  // (a, b, c, z, v, w) ↦ ((a, b, z, v), (b, c, z, w)).
  g.pairs = {make_map(3 * k + q + 2 * r, 2 * N, [k, q, r, N](const auto& s) {
               using T = scalar_of<decltype(s)>;
               VecX<T> out(2 * N);
               out << s.head(k), s.segment(k, k), s.segment(3 * k, q), s.segment(3 * k + q, r),
                   s.segment(k, k), s.segment(2 * k, k), s.segment(3 * k, q), s.segment(3 * k + q + r, r);
               return out;
             }),
             Vec::Constant(3 * k + q + 2 * r, -1.0), Vec::Constant(3 * k + q + 2 * r, 1.0)};
  // (a, b, c, d, z, u, v, w) ↦ triple of composable arrows.
  g.triples = {make_map(4 * k + q + 3 * r, 3 * N, [k, q, r, N](const auto& s) {
                 using T = scalar_of<decltype(s)>;
                 const int z0 = 4 * k;
                 const int v0 = z0 + q;
                 VecX<T> out(3 * N);
                 for (int c = 0; c < 3; ++c)
                   out.segment(c * N, N) << s.segment(c * k, k), s.segment((c + 1) * k, k), s.segment(z0, q),
                       s.segment(v0 + c * r, r);
                 return out;
               }),
               Vec::Constant(4 * k + q + 3 * r, -1.0), Vec::Constant(4 * k + q + 3 * r, 1.0)};
  g.arrows = box_sampler(Vec::Constant(N, -1.0), Vec::Constant(N, 1.0));
  g.bases = box_sampler(Vec::Constant(n, -1.0), Vec::Constant(n, 1.0));
  return g;
}

}  // namespace

std::pair<ChartGroupoid, GroupoidForm> foliation_groupoid(int n, int k) {
  CoordFoliation f(n, k);
  const int q = f.codim();
  ChartGroupoid g = leafwise_pair_groupoid(n, k, true);
  Mat m = Mat::Zero(g.total_dim, g.total_dim);
  for (int i = 0; i < q; ++i) {
    m(2 * k + i, 2 * k + q + i) = 1.0;
    m(2 * k + q + i, 2 * k + i) = -1.0;
  }
  GroupoidForm form;
  form.omega = constant_two_form(m);
  return {g, form};
}

ChartGroupoid monodromy_groupoid(int n, int k) {
  CoordFoliation f(n, k);
  return leafwise_pair_groupoid(n, k, false);
}

Mat c_omega(const ChartGroupoid& g, const GroupoidForm& f, int k, const Vec& x, double tol) {
  RhoStar rs = extract_rho_star(g, f, x, tol);
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(rs.rho);
  Mat c(k, k);
  for (int i = 0; i < k; ++i) {
    Vec target = Vec::Unit(g.base_dim, i);
    Vec coef = cod.solve(target);
    if ((rs.rho * coef - target).lpNorm<Eigen::Infinity>() > 1e-9)
      throw std::runtime_error("leaf direction is not in the image of the anchor");
    Vec xi = rs.rho_star * coef;
    c.row(i) = xi.head(k).transpose();
  }
  return c;
}

double c_omega_exactness_residual(const ChartGroupoid& g, const GroupoidForm& f, int k,
                                  const Form& sigma, const std::vector<Vec>& samples) {
  Form ds = ext_d(sigma);
  double worst = 0.0;
  for (const auto& x : samples) {
    Mat want = form_matrix(ds, x).topLeftCorner(k, k);
    worst = std::max(worst, max_abs(c_omega(g, f, k, x) - want));
  }
  return worst;
}

}  // namespace dirac
