#include "dirac/equivariant.hpp"

namespace dirac {

namespace {

Vec join(const Vec& a, const Vec& b) {
  Vec out(a.size() + b.size());
  out << a, b;
  return out;
}

// D_x(g·) at (u, x).
Mat action_jacobian(const CartanTriple& tr, const Vec& u, const Vec& x) {
  Mat j = jacobian<double>(tr.action, join(u, x));
  return j.rightCols(tr.m);
}

std::vector<SmoothMap> generators(const CartanTriple& tr) {
  std::vector<SmoothMap> out;
  for (int i = 0; i < tr.group.dim(); ++i) out.push_back(generator(tr, i));
  return out;
}

}  // namespace

CartanResiduals cartan_closed_residual(const CartanTriple& tr, const std::vector<Vec>& samples) {
  const int d = tr.group.dim();
  const auto rho = generators(tr);
  const auto& c = tr.group.structure();
  std::vector<Form> r2_forms, r3_forms;
  for (int i = 0; i < d; ++i) {
    Form f = (-1.0) * ext_d(tr.rho_star[i]);
    if (tr.phi.valid()) f = interior(rho[i], tr.phi) + f;
    r2_forms.push_back(f);
  }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Form f = (-1.0) * lie_derivative(rho[i], tr.rho_star[j]);
      for (int k = 0; k < d; ++k)
        if (c[k](i, j) != 0.0) f = f + (-c[k](i, j)) * tr.rho_star[k];
      r3_forms.push_back(f);
    }
  CartanResiduals out;
  for (const auto& x : samples) {
    double w1 = 0.0, w2 = 0.0, w3 = 0.0;
    for (int i = 0; i < d; ++i) {
      w1 = std::max(w1, std::abs(tr.rho_star[i].at(x, {rho[i](x)})));
      if (tr.m >= 2) w2 = std::max(w2, form_components(r2_forms[i], x).lpNorm<Eigen::Infinity>());
    }
    for (const auto& f : r3_forms) w3 = std::max(w3, covector(f, x).lpNorm<Eigen::Infinity>());
    out.r1.update(w1, x);
    out.r2.update(w2, x);
    out.r3.update(w3, x);
  }
  return out;
}

Residual group_invariance_residual(const CartanTriple& tr, const std::vector<Vec>& samples) {
  const int d = tr.group.dim();
  Residual res;
  for (const auto& p : samples) {
    Vec u = p.head(d), x = p.tail(tr.m);
    Mat ad = tr.group.ad_matrix<double>(tr.group.exp<double>(u));
    Vec y = tr.action(p);
    Mat a = action_jacobian(tr, u, x);
    Mat at_y(tr.m, d);
    for (int j = 0; j < d; ++j) at_y.col(j) = covector(tr.rho_star[j], y);
    double worst = 0.0;
    for (int i = 0; i < d; ++i) {
      Vec lhs = a.transpose() * (at_y * ad.col(i));
      worst = std::max(worst, (lhs - covector(tr.rho_star[i], x)).lpNorm<Eigen::Infinity>());
    }
    res.update(worst, p);
  }
  return res;
}

Residual action_axiom_residual(const CartanTriple& tr, const std::vector<Vec>& samples) {
  const int d = tr.group.dim();
  Residual res;
  for (const auto& p : samples) {
    Vec ua = p.head(d), ub = p.segment(d, d), x = p.tail(tr.m);
    Vec inner = tr.action(join(ub, x));
    Vec lhs = tr.action(join(ua, inner));
    Vec rhs = tr.action(join(tr.group.product<double>(ua, ub), x));
    double err = (lhs - rhs).lpNorm<Eigen::Infinity>();
    err = std::max(err, (tr.action(join(Vec::Zero(d), x)) - x).lpNorm<Eigen::Infinity>());
    res.update(err, p);
  }
  return res;
}

AnchoredDual action_anchored_dual(const CartanTriple& tr) {
  const int d = tr.group.dim();
  AnchoredDual out;
  out.rank = d;
  out.anchor = generators(tr);
  out.rho_star = tr.rho_star;
  out.structure = zero_structure(d, tr.m);
  const auto& c = tr.group.structure();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        out.structure[i][j][k] = Expr::constant(-c[k](i, j), default_variables(tr.m));
  return out;
}

Mat slice_form(const CartanTriple& tr, const Form& omega, const Vec& u, const Vec& x) {
  return form_matrix(omega, join(u, x)).bottomRightCorner(tr.m, tr.m);
}

Residual cocycle_residual(const CartanTriple& tr, const Form& omega, const std::vector<Vec>& samples) {
  const int d = tr.group.dim();
  Residual res;
  for (const auto& p : samples) {
    Vec uh = p.head(d), ug = p.segment(d, d), x = p.tail(tr.m);
    Vec gx = tr.action(join(ug, x));
    Mat a = action_jacobian(tr, ug, x);
    Mat lhs = slice_form(tr, omega, tr.group.product<double>(uh, ug), x);
    Mat rhs = a.transpose() * slice_form(tr, omega, uh, gx) * a + slice_form(tr, omega, ug, x);
    res.update(max_abs(lhs - rhs), p);
  }
  return res;
}

std::vector<Vec> draw_group_points(const CartanTriple& tr, SampleRng& rng, int count) {
  const int d = tr.group.dim();
  std::vector<Vec> out;
  for (int i = 0; i < count; ++i) {
    Vec u = rng.uniform_vec(d, -tr.group_box, tr.group_box);
    out.push_back(join(u, tr.points.draw(rng)));
  }
  return out;
}

std::vector<Vec> draw_group_pairs(const CartanTriple& tr, SampleRng& rng, int count) {
  const int d = tr.group.dim();
  std::vector<Vec> out;
  for (int i = 0; i < count; ++i) {
    Vec ua = rng.uniform_vec(d, -tr.group_box, tr.group_box);
    Vec ub = rng.uniform_vec(d, -tr.group_box, tr.group_box);
    out.push_back(join(join(ua, ub), tr.points.draw(rng)));
  }
  return out;
}

CartanTriple rotation_plane_triple() {
  MatrixGroup h = MatrixGroup::u1();
  CartanTriple tr{h, 2, {}, {constant_covector(Vec::Zero(2))}, Form(), {}, 0.3};
  tr.action = make_map(3, 2, [](const auto& p) {
    using T = scalar_of<decltype(p)>;
    using std::cos;
    using std::sin;
    VecX<T> out(2);
    out << cos(p[0]) * p[1] - sin(p[0]) * p[2], sin(p[0]) * p[1] + cos(p[0]) * p[2];
    return out;
  });
  tr.points = box_sampler(Vec::Constant(2, -1.0), Vec::Constant(2, 1.0));
  return tr;
}

CartanTriple trivial_torus_triple() {
  MatrixGroup h = MatrixGroup::torus2();
  CartanTriple tr{h, 2, {}, {constant_covector(Vec::Zero(2)), constant_covector(Vec::Zero(2))},
                  Form(), {}, 0.3};
  tr.action = coordinate_slice(4, 2, 2);
  tr.points = box_sampler(Vec::Constant(2, -1.0), Vec::Constant(2, 1.0));
  return tr;
}

}  // namespace dirac
