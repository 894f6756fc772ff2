#include "dirac/liegroup.hpp"

namespace dirac {

namespace {

Mat from_columns(int size, const std::vector<std::pair<int, std::pair<int, double>>>& entries) {
  Mat m = Mat::Zero(size, size);
  for (const auto& [col, rv] : entries) m(rv.first, col) = rv.second;
  return m;
}

Mat rotation_generator(int size, int a, int b) {
  Mat m = Mat::Zero(size, size);
  m(b, a) = 1.0;
  m(a, b) = -1.0;
  return m;
}

}  // namespace

MatrixGroup make_group(std::string name, GroupKind kind, std::vector<Mat> basis) {
  MatrixGroup h;
  h.name_ = std::move(name);
  h.kind_ = kind;
  h.size_ = static_cast<int>(basis.front().rows());
  h.basis_ = std::move(basis);
  h.finish();
  return h;
}

void MatrixGroup::finish() {
  const int d = dim();
  Mat gram(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) gram(i, j) = basis_[i].cwiseProduct(basis_[j]).sum();
  gram_inv_ = gram.inverse();
  // −tr(uv) normalized so that the basis is orthonormal.
  metric_ = Mat(d, d);
  const double scale = gram(0, 0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) metric_(i, j) = -(basis_[i] * basis_[j]).trace() / scale;
  structure_.assign(d, Mat::Zero(d, d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Vec c = vee<double>(Mat(basis_[i] * basis_[j] - basis_[j] * basis_[i]));
      for (int k = 0; k < d; ++k) structure_[k](i, j) = c[k];
    }
}

MatrixGroup MatrixGroup::so3() {
  return make_group("so3", GroupKind::SO3,
                    {rotation_generator(3, 1, 2), rotation_generator(3, 2, 0),
                     rotation_generator(3, 0, 1)});
}

MatrixGroup MatrixGroup::su2() {
  // Left multiplication by i, j, k on quaternions a + bi + cj + dk.
  Mat li = from_columns(4, {{0, {1, 1}}, {1, {0, -1}}, {2, {3, 1}}, {3, {2, -1}}});
  Mat lj = from_columns(4, {{0, {2, 1}}, {1, {3, -1}}, {2, {0, -1}}, {3, {1, 1}}});
  Mat lk = from_columns(4, {{0, {3, 1}}, {1, {2, 1}}, {2, {1, -1}}, {3, {0, -1}}});
  return make_group("su2", GroupKind::SU2, {li, lj, lk});
}

MatrixGroup MatrixGroup::u1() { return make_group("u1", GroupKind::U1, {rotation_generator(2, 0, 1)}); }

MatrixGroup MatrixGroup::torus2() {
  return make_group("torus2", GroupKind::Torus2,
                    {rotation_generator(4, 0, 1), rotation_generator(4, 2, 3)});
}

std::vector<std::string> MatrixGroup::names() { return {"so3", "su2", "u1", "torus2"}; }

MatrixGroup MatrixGroup::by_name(const std::string& name) {
  if (name == "so3") return so3();
  if (name == "su2") return su2();
  if (name == "u1") return u1();
  if (name == "torus2") return torus2();
  throw std::invalid_argument("unknown group '" + name + "'");
}

Form cartan_form(const MatrixGroup& h) {
  return make_form(h.dim(), 3, [h](const auto& x, auto vs) -> scalar_of<decltype(x)> {
    using T = scalar_of<decltype(x)>;
    if constexpr (!kLiftable<T>) {
      throw_depth();
    } else {
      MatX<T> lam = h.lambda<T>(x);
      VecX<T> a = lam * vs[0], b = lam * vs[1], c = lam * vs[2];
      return T(0.5) * h.inner<T>(a, h.bracket<T>(b, c));
    }
  });
}

LinearDirac cartan_dirac(const MatrixGroup& h, const Mat& g, double tol) {
  const int d = h.dim();
  Mat ad_inv = h.ad_matrix<double>(Mat(g.transpose()));
  Mat span(2 * d, d);
  span.topRows(d) = ad_inv - Mat::Identity(d, d);
  span.bottomRows(d) = 0.5 * h.metric() * (Mat::Identity(d, d) + ad_inv);
  return LinearDirac::from_span(span, tol);
}

LinearDirac cartan_dirac_chart(const MatrixGroup& h, const Vec& u, double tol) {
  const int d = h.dim();
  Mat lam = h.lambda<double>(u);
  Mat lam_bar = h.lambda_bar<double>(u);
  Mat ad_inv = h.ad_matrix<double>(Mat(h.exp<double>(u).transpose()));
  Mat span(2 * d, d);
  span.topRows(d) = lam.inverse() * (ad_inv - Mat::Identity(d, d));
  span.bottomRows(d) = 0.5 * (lam + lam_bar).transpose() * h.metric();
  return LinearDirac::from_span(span, tol);
}

std::vector<Form> cartan_rho_star(const MatrixGroup& h) {
  std::vector<Form> out;
  for (int i = 0; i < h.dim(); ++i) {
    out.push_back(make_form(h.dim(), 1, [h, i](const auto& x, auto vs) -> scalar_of<decltype(x)> {
      using T = scalar_of<decltype(x)>;
      if constexpr (!kLiftable<T>) {
        throw_depth();
      } else {
        VecX<T> y = (h.lambda<T>(x) + h.lambda_bar<T>(x)) * vs[0];
        VecX<T> e = VecX<T>::Zero(h.dim());
        e[i] = T(1.0);
        return T(0.5) * h.inner<T>(e, y);
      }
    }));
  }
  return out;
}

AlmostDiracField cartan_dirac_field(const MatrixGroup& h) {
  AlmostDiracField l;
  auto rs = cartan_rho_star(h);
  for (int i = 0; i < h.dim(); ++i) {
    SmoothMap x = make_map(h.dim(), h.dim(), [h, i](const auto& u) -> VecX<scalar_of<decltype(u)>> {
      using T = scalar_of<decltype(u)>;
      if constexpr (!kLiftable<T>) {
        throw_depth();
      } else {
        MatX<T> ad_inv = h.ad_matrix<T>(MatX<T>(h.exp<T>(u).transpose()));
        VecX<T> rhs = ad_inv.col(i);
        rhs[i] = rhs[i] - T(1.0);
        return solve_small<T>(h.lambda<T>(u), rhs);
      }
    });
    l.frame.push_back({x, rs[i]});
  }
  return l;
}

SmoothMap generator(const CartanTriple& tr, int i) {
  const int d = tr.group.dim();
  const int m = tr.m;
  SmoothMap action = tr.action;
  return make_map(m, m, [action, d, m, i](const auto& x) -> VecX<scalar_of<decltype(x)>> {
    using T = scalar_of<decltype(x)>;
    VecX<T> p = VecX<T>::Zero(d + m);
    p.tail(m) = x;
    VecX<T> dir = VecX<T>::Zero(d + m);
    dir[i] = T(1.0);
    return directional<T>(action, p, dir);
  });
}

namespace {

// Σ_i a_i ρ*(e_i)(x; y).
template <class T>
T rho_star_pair(const std::vector<Form>& rs, const VecX<T>& x, const VecX<T>& a, const VecX<T>& y) {
  T acc(0.0);
  for (std::size_t i = 0; i < rs.size(); ++i)
    acc = acc + a[i] * rs[i](x, std::span<const VecX<T>>(&y, 1));
  return acc;
}

Vec stack(std::initializer_list<Vec> parts) {
  Eigen::Index n = 0;
  for (const auto& p : parts) n += p.size();
  Vec out(n);
  Eigen::Index at = 0;
  for (const auto& p : parts) {
    out.segment(at, p.size()) = p;
    at += p.size();
  }
  return out;
}

}  // namespace

Form general_action_form(const CartanTriple& tr) {
  const MatrixGroup h = tr.group;
  const int d = h.dim();
  const int m = tr.m;
  auto rs = tr.rho_star;
  SmoothMap action = tr.action;
  return make_form(d + m, 2, [h, d, m, rs, action](const auto& p, auto vs) -> scalar_of<decltype(p)> {
    using T = scalar_of<decltype(p)>;
    if constexpr (!kLiftable<T>) {
      throw_depth();
    } else {
      VecX<T> u = p.head(d), x = p.tail(m);
      MatX<T> lam = h.lambda<T>(u);
      VecX<T> a = lam * vs[0].head(d), a2 = lam * vs[1].head(d);
      VecX<T> base = VecX<T>::Zero(d + m);
      base.tail(m) = x;
      VecX<T> dir = VecX<T>::Zero(d + m);
      dir.head(d) = a2;
      VecX<T> rho_a2 = directional<T>(action, base, dir);
      VecX<T> xv = vs[0].tail(m), xv2 = vs[1].tail(m);
      return rho_star_pair<T>(rs, x, a, rho_a2) + rho_star_pair<T>(rs, x, a, xv2) -
             rho_star_pair<T>(rs, x, a2, xv);
    }
  });
}

ChartGroupoid action_groupoid(const CartanTriple& tr) {
  const MatrixGroup h = tr.group;
  const int d = h.dim();
  const int m = tr.m;
  const int n = d + m;
  SmoothMap action = tr.action;
  SmoothMap pts = tr.points.map;
  const int q = tr.points.param_dim();

  ChartGroupoid g;
  g.name = h.name() + "-action";
  g.total_dim = n;
  g.base_dim = m;
  g.s = coordinate_slice(n, d, m);
  g.t = action;
  g.unit = make_map(m, n, [d, m](const auto& x) {
    using T = scalar_of<decltype(x)>;
    VecX<T> out = VecX<T>::Zero(d + m);
    out.tail(m) = x;
    return out;
  });
  g.inverse = make_map(n, n, [action, d, m](const auto& a) {
    using T = scalar_of<decltype(a)>;
    VecX<T> out(d + m);
    out << -a.head(d), action(a);
    return out;
  });
  g.mult = make_map(2 * n, n, [h, d, m, n](const auto& p) {
    using T = scalar_of<decltype(p)>;
    VecX<T> out(n);
    out << h.product<T>(p.head(d), p.segment(n, d)), p.tail(m);
    return out;
  });
  auto act = [action, d, m](const auto& u, const auto& x) {
    using T = scalar_of<decltype(u)>;
    VecX<T> p(d + m);
    p << u, x;
    return action(p);
  };
  Vec glo = Vec::Constant(d, -tr.group_box), ghi = Vec::Constant(d, tr.group_box);
  // (u1, u2, q) ↦ ((u1, u2·x), (u2, x)).
  g.pairs = {make_map(2 * d + q, 2 * n,
                      [act, pts, d, q, n](const auto& r) {
                        using T = scalar_of<decltype(r)>;
                        VecX<T> x = pts(VecX<T>(r.tail(q)));
                        VecX<T> u2 = r.segment(d, d);
                        VecX<T> out(2 * n);
                        out << r.head(d), act(u2, x), u2, x;
                        return out;
                      }),
             stack({glo, glo, tr.points.lo}), stack({ghi, ghi, tr.points.hi})};
  g.triples = {make_map(3 * d + q, 3 * n,
                        [act, pts, d, q, n](const auto& r) {
                          using T = scalar_of<decltype(r)>;
                          VecX<T> x = pts(VecX<T>(r.tail(q)));
                          VecX<T> u2 = r.segment(d, d), u3 = r.segment(2 * d, d);
                          VecX<T> x3 = act(u3, x);
                          VecX<T> out(3 * n);
                          out << r.head(d), act(u2, x3), u2, x3, u3, x;
                          return out;
                        }),
               stack({glo, glo, glo, tr.points.lo}), stack({ghi, ghi, ghi, tr.points.hi})};
  g.arrows = {make_map(d + q, n,
                       [pts, d, q, n](const auto& r) {
                         using T = scalar_of<decltype(r)>;
                         VecX<T> out(n);
                         out << r.head(d), pts(VecX<T>(r.tail(q)));
                         return out;
                       }),
              stack({glo, tr.points.lo}), stack({ghi, tr.points.hi})};
  g.bases = tr.points;
  g.algebroid_basis = [d, n](const Vec&) {
    Mat b = Mat::Zero(n, d);
    b.topRows(d).setIdentity();
    return b;
  };
  return g;
}

CartanTriple conjugation_triple(const MatrixGroup& h) {
  const int d = h.dim();
  CartanTriple tr{h, d, {}, cartan_rho_star(h), cartan_form(h), {}, 0.15};
  tr.action = make_map(2 * d, d, [h, d](const auto& p) {
    using T = scalar_of<decltype(p)>;
    MatX<T> g = h.exp<T>(p.head(d));
    return VecX<T>(h.ad_matrix<T>(g) * p.tail(d));
  });
  tr.points = box_sampler(Vec::Constant(d, -0.35), Vec::Constant(d, 0.35));
  return tr;
}

CartanTriple coadjoint_triple(const MatrixGroup& h) {
  const int d = h.dim();
  std::vector<Form> rs;
  for (int i = 0; i < d; ++i) rs.push_back(constant_covector(Vec::Unit(d, i)));
  CartanTriple tr{h, d, {}, rs, Form(), {}, 0.15};
  tr.action = make_map(2 * d, d, [h, d](const auto& p) {
    using T = scalar_of<decltype(p)>;
    MatX<T> g = h.exp<T>(p.head(d));
    MatX<T> ad_inv = h.ad_matrix<T>(MatX<T>(g.transpose()));
    return VecX<T>(ad_inv.transpose() * p.tail(d));
  });
  tr.points = box_sampler(Vec::Constant(d, -1.0), Vec::Constant(d, 1.0));
  return tr;
}

Form amm_form(const MatrixGroup& h) {
  const int d = h.dim();
  return make_form(2 * d, 2, [h, d](const auto& p, auto vs) -> scalar_of<decltype(p)> {
    using T = scalar_of<decltype(p)>;
    if constexpr (!kLiftable<T>) {
      throw_depth();
    } else {
      VecX<T> ug = p.head(d), ux = p.tail(d);
      MatX<T> lam = h.lambda<T>(ug);
      MatX<T> both = h.lambda<T>(ux) + h.lambda_bar<T>(ux);
      MatX<T> adx = h.ad_matrix<T>(h.exp<T>(ux));
      VecX<T> a = lam * vs[0].head(d), a2 = lam * vs[1].head(d);
      VecX<T> b = both * vs[0].tail(d), b2 = both * vs[1].tail(d);
      VecX<T> ada = adx * a, ada2 = adx * a2;
      return T(0.5) * (h.inner<T>(ada, a2) - h.inner<T>(ada2, a) + h.inner<T>(a, b2) -
                       h.inner<T>(a2, b));
    }
  });
}

std::pair<ChartGroupoid, GroupoidForm> amm_groupoid(const MatrixGroup& h) {
  CartanTriple tr = conjugation_triple(h);
  ChartGroupoid g = action_groupoid(tr);
  g.name = "amm-" + h.name();
  GroupoidForm f;
  f.omega = amm_form(h);
  f.phi = tr.phi;
  return {g, f};
}

std::pair<ChartGroupoid, GroupoidForm> coadjoint_groupoid(const MatrixGroup& h) {
  CartanTriple tr = coadjoint_triple(h);
  ChartGroupoid g = action_groupoid(tr);
  g.name = "coadjoint-" + h.name();
  GroupoidForm f;
  f.omega = general_action_form(tr);
  return {g, f};
}

Form liouville_form(const MatrixGroup& h) {
  const int d = h.dim();
  return make_form(2 * d, 1, [h, d](const auto& p, auto vs) -> scalar_of<decltype(p)> {
    using T = scalar_of<decltype(p)>;
    if constexpr (!kLiftable<T>) {
      throw_depth();
    } else {
      VecX<T> a = h.lambda<T>(VecX<T>(p.head(d))) * vs[0].head(d);
      return VecX<T>(p.tail(d)).dot(a);
    }
  });
}

}  // namespace dirac
