#include "dirac/groupoid.hpp"

#include <cmath>

namespace dirac {

BoxSampler box_sampler(const Vec& lo, const Vec& hi) {
  return {identity_map(static_cast<int>(lo.size())), lo, hi};
}

GroupoidSamples draw_samples(const ChartGroupoid& g, const SamplePolicy& policy) {
  SampleRng rng(policy.seed);
  GroupoidSamples smp;
  for (int i = 0; i < policy.samples; ++i) smp.pair_params.push_back(g.pairs.param(rng));
  for (int i = 0; i < policy.samples; ++i) smp.triple_params.push_back(g.triples.param(rng));
  for (int i = 0; i < policy.samples; ++i) smp.arrows.push_back(g.arrows.draw(rng));
  for (const auto& p : g.probe_arrows) smp.arrows.push_back(p);
  for (int i = 0; i < policy.samples; ++i) smp.bases.push_back(g.bases.draw(rng));
  return smp;
}

Mat pullback_matrix(const SmoothMap& f, const Form& omega, const Vec& x) {
  Mat j = jacobian<double>(f, x);
  return j.transpose() * form_matrix(omega, f(x)) * j;
}

namespace {

double vec_err(const Vec& a, const Vec& b) { return (a - b).lpNorm<Eigen::Infinity>(); }

// Components of f*φ at x over increasing index triples.
Vec pulled_components(const SmoothMap& f, const Form& phi, const Vec& x) {
  const int n = f.in_dim();
  if (!phi.valid()) return Vec::Zero(multi_indices(n, 3).size());
  auto idx = multi_indices(n, phi.degree());
  Vec out(idx.size());
  Mat j = jacobian<double>(f, x);
  Vec y = f(x);
  for (std::size_t c = 0; c < idx.size(); ++c) {
    std::vector<Vec> vs;
    for (int i : idx[c]) vs.push_back(j.col(i));
    out[c] = phi.at(y, vs);
  }
  return out;
}

Mat omega_perp(const Mat& omega, const Mat& w, double tol) {
  if (w.cols() == 0) return Mat::Identity(omega.rows(), omega.rows());
  return null_space((omega * w).transpose(), tol);
}

Mat kernel_logged(const Mat& m, double tol, const std::string& where, ClassificationReport* rep) {
  RankInfo info = rank_info(m, tol);
  if (rep) {
    rep->rank_diagnostics.push_back({where, info});
    if (info.indeterminate) rep->indeterminate = true;
  }
  return null_space(m, tol);
}

}  // namespace

StructuralResiduals check_structure(const ChartGroupoid& g, const GroupoidSamples& smp) {
  StructuralResiduals r;
  const int n = g.total_dim;
  for (const auto& x : smp.bases) {
    Vec e = g.unit(x);
    r.unit_source_target.update(std::max(vec_err(g.s(e), x), vec_err(g.t(e), x)), x);
  }
  for (const auto& q : smp.pair_params) {
    Vec p = g.pairs.map(q);
    Vec a = p.head(n), b = p.tail(n);
    Vec ab = g.mult(p);
    double err = std::max(vec_err(g.s(ab), g.s(b)), vec_err(g.t(ab), g.t(a)));
    err = std::max(err, vec_err(g.s(a), g.t(b)));
    r.source_target_mult.update(err, p);
  }
  for (const auto& q : smp.triple_params) {
    Vec p = g.triples.map(q);
    Vec a = p.segment(0, n), b = p.segment(n, n), c = p.segment(2 * n, n);
    Vec ab(2 * n), bc(2 * n);
    ab << a, b;
    bc << b, c;
    Vec left_in(2 * n), right_in(2 * n);
    left_in << g.mult(ab), c;
    right_in << a, g.mult(bc);
    r.associativity.update(vec_err(g.mult(left_in), g.mult(right_in)), p);
  }
  for (const auto& a : smp.arrows) {
    Vec ai = g.inverse(a);
    Vec pair(2 * n);
    pair << a, ai;
    double err = std::max(vec_err(g.inverse(ai), a), vec_err(g.mult(pair), g.unit(g.t(a))));
    r.inverse.update(err, a);
  }
  return r;
}

Residual check_multiplicative(const ChartGroupoid& g, const GroupoidForm& f,
                              const GroupoidSamples& smp) {
  const int n = g.total_dim;
  Residual r;
  for (const auto& q : smp.pair_params) {
    Vec p = g.pairs.map(q);
    Mat jp = jacobian<double>(g.pairs.map, q);
    Mat jm = jacobian<double>(g.mult, p) * jp;
    Mat j1 = jp.topRows(n), j2 = jp.bottomRows(n);
    Mat defect = jm.transpose() * form_matrix(f.omega, g.mult(p)) * jm -
                 j1.transpose() * form_matrix(f.omega, p.head(n)) * j1 -
                 j2.transpose() * form_matrix(f.omega, p.tail(n)) * j2;
    r.update(max_abs(defect), p);
  }
  return r;
}

Residual check_rel_closed(const ChartGroupoid& g, const GroupoidForm& f, const GroupoidSamples& smp) {
  Form d = ext_d(f.omega);
  Residual r;
  for (const auto& a : smp.arrows) {
    Vec lhs = form_components(d, a);
    Vec rhs = pulled_components(g.s, f.phi, a) - pulled_components(g.t, f.phi, a);
    r.update(vec_err(lhs, rhs), a);
  }
  return r;
}

UnitIdentityResiduals check_unit_identities(const ChartGroupoid& g, const GroupoidForm& f,
                                            const GroupoidSamples& smp) {
  UnitIdentityResiduals r;
  for (const auto& x : smp.bases) r.eps.update(max_abs(pullback_matrix(g.unit, f.omega, x)), x);
  for (const auto& a : smp.arrows)
    r.inv.update(max_abs(pullback_matrix(g.inverse, f.omega, a) + form_matrix(f.omega, a)), a);
  return r;
}

Residual check_kernel_orthogonality(const ChartGroupoid& g, const GroupoidForm& f,
                                    const GroupoidSamples& smp, double tol) {
  Residual r;
  for (const auto& a : smp.arrows) {
    Mat w = form_matrix(f.omega, a);
    Mat ks = null_space(jacobian<double>(g.s, a), tol);
    Mat kw = null_space(w, tol);
    Mat kt = null_space(jacobian<double>(g.t, a), tol);
    Mat left(ks.rows(), ks.cols() + kw.cols());
    left << ks, kw;
    r.update(left.cols() && kt.cols() ? max_abs(left.transpose() * w * kt) : 0.0, a);
  }
  return r;
}

Residual check_orbit_form(const ChartGroupoid& g, const GroupoidForm& f, const GroupoidSamples& smp) {
  Residual r;
  if (!f.orbit.valid()) return r;
  for (const auto& a : smp.arrows) {
    Mat expected = pullback_matrix(g.t, f.orbit, a) - pullback_matrix(g.s, f.orbit, a);
    r.update(max_abs(form_matrix(f.omega, a) - expected), a);
  }
  return r;
}

RhoStar extract_rho_star(const ChartGroupoid& g, const GroupoidForm& f, const Vec& x, double tol) {
  Vec e = g.unit(x);
  Mat ds = jacobian<double>(g.s, e);
  RankInfo info = rank_info(ds, tol);
  if (info.rank != g.base_dim || info.indeterminate)
    throw RankDefectError("ds has rank " + std::to_string(info.rank) + " at " + format_point(x));
  RhoStar out;
  out.basis = g.algebroid_basis ? g.algebroid_basis(x) : null_space(ds, tol);
  Mat deps = jacobian<double>(g.unit, x);
  Mat w = form_matrix(f.omega, e);
  out.rho = jacobian<double>(g.t, e) * out.basis;
  out.rho_star = (out.basis.transpose() * w * deps).transpose();
  return out;
}

double unit_decomposition_residual(const ChartGroupoid& g, const GroupoidForm& f, const Vec& x) {
  RhoStar r = extract_rho_star(g, f, x);
  Vec e = g.unit(x);
  Mat ds = jacobian<double>(g.s, e);
  Mat deps = jacobian<double>(g.unit, x);
  const int nn = g.total_dim;
  Mat big_x = ds;                                   // n×N, base parts of basis vectors
  Mat alpha = Mat::Identity(nn, nn) - deps * ds;    // N×N, algebroid parts
  Mat coeff = r.basis.completeOrthogonalDecomposition().solve(alpha);  // r×N
  Mat xi = r.rho_star * coeff;                      // n×N, ρ*(α_i)
  Mat rho = r.rho * coeff;                          // n×N, ρ(α_i)
  Mat predicted = xi.transpose() * big_x - big_x.transpose() * xi + xi.transpose() * rho;
  return max_abs(predicted - form_matrix(f.omega, e));
}

LinearDirac induced_dirac(const ChartGroupoid& g, const GroupoidForm& f, const Vec& x, double tol) {
  RhoStar r = extract_rho_star(g, f, x, tol);
  Vec e = g.unit(x);
  Mat w = form_matrix(f.omega, e);
  Mat deps = jacobian<double>(g.unit, x);
  Mat ds = jacobian<double>(g.s, e);
  Mat k = intersect(null_space(w, tol), deps, tol);
  const int n = g.base_dim;
  Mat span(2 * n, r.rho.cols() + k.cols());
  span.topLeftCorner(n, r.rho.cols()) = r.rho;
  span.bottomLeftCorner(n, r.rho.cols()) = r.rho_star;
  span.topRightCorner(n, k.cols()) = ds * k;
  span.bottomRightCorner(n, k.cols()).setZero();
  try {
    return LinearDirac::from_span(span, tol);
  } catch (const NotDiracError& err) {
    throw NonDiracPointError("non-Dirac point " + format_point(x) + ": " + err.what());
  }
}

LinearDirac pushed_dirac(const ChartGroupoid& g, const GroupoidForm& f, const Vec& arrow,
                         double tol) {
  LinearDirac graph = from_form(form_matrix(f.omega, arrow), tol);
  return push_forward(jacobian<double>(g.t, arrow), graph);
}

ClassificationReport classify(const ChartGroupoid& g, const GroupoidForm& f,
                              const SamplePolicy& policy, double residual_tol) {
  ClassificationReport rep;
  GroupoidSamples smp = draw_samples(g, policy);
  const double tol = policy.tol;
  const int nn = g.total_dim, n = g.base_dim;

  StructuralResiduals st = check_structure(g, smp);
  rep.residuals["structure_units"] = st.unit_source_target;
  rep.residuals["structure_source_target"] = st.source_target_mult;
  rep.residuals["structure_associativity"] = st.associativity;
  rep.residuals["structure_inverse"] = st.inverse;
  rep.residuals["multiplicative"] = check_multiplicative(g, f, smp);
  rep.residuals["rel_closed"] = check_rel_closed(g, f, smp);
  UnitIdentityResiduals ui = check_unit_identities(g, f, smp);
  rep.residuals["unit_pullback"] = ui.eps;
  rep.residuals["inverse_pullback"] = ui.inv;
  rep.residuals["kernel_orthogonality"] = check_kernel_orthogonality(g, f, smp, tol);
  if (f.orbit.valid()) rep.residuals["orbit_form"] = check_orbit_form(g, f, smp);

  Residual subspace, dims, decomposition;
  bool robust = true, over = true, nondeg = true;
  auto unit_kernel_dim = [&](const Vec& x, const std::string& tag) {
    Mat w = form_matrix(f.omega, g.unit(x));
    return static_cast<int>(kernel_logged(w, tol, tag + " " + format_point(x), &rep).cols());
  };
  for (const auto& x : smp.bases) {
    Vec e = g.unit(x);
    Mat w = form_matrix(f.omega, e);
    Mat k = kernel_logged(w, tol, "unit " + format_point(x), &rep);
    Mat ks = null_space(jacobian<double>(g.s, e), tol);
    Mat kt = null_space(jacobian<double>(g.t, e), tol);
    Mat tm = column_space(jacobian<double>(g.unit, x), tol);
    Mat k_tm = intersect(k, tm, tol);
    Mat k_ds = intersect(k, ks, tol);
    Mat iso = intersect(k_ds, kt, tol);
    UnitDims ud{x, static_cast<int>(k.cols()), static_cast<int>(k_tm.cols()),
                static_cast<int>(k_ds.cols()), static_cast<int>(iso.cols())};
    rep.units.push_back(ud);

    double dist = std::max(subspace_distance(subspace_sum(ks, k, tol), omega_perp(w, kt, tol), tol),
                           subspace_distance(subspace_sum(tm, k, tol), omega_perp(w, tm, tol), tol));
    dist = std::max(dist, subspace_distance(subspace_sum(k_ds, k_tm, tol), k, tol));
    subspace.update(dist, x);
    int bad = 0;
    if (ud.ker != ud.ker_tm + ud.ker_ds) ++bad;
    if (2 * ud.ker_tm != ud.ker + 2 * n - nn) ++bad;
    if (2 * ud.ker_ds != ud.ker - 2 * n + nn) ++bad;
    dims.update(bad, x);
    decomposition.update(unit_decomposition_residual(g, f, x), x);

    if (ud.isotropy != nn - 2 * n) robust = false;
    if (!contains(intersect(ks, kt, tol), k)) over = false;
    if (ud.ker != 0) nondeg = false;
  }
  rep.residuals["unit_subspace_identities"] = subspace;
  rep.residuals["unit_dimension_identities"] = dims;
  rep.residuals["unit_decomposition"] = decomposition;

  Residual dirac;
  for (std::size_t i = 0; i < smp.arrows.size(); ++i) {
    const Vec& a = smp.arrows[i];
    Mat w = form_matrix(f.omega, a);
    int kg = static_cast<int>(kernel_logged(w, tol, "arrow " + format_point(a), &rep).cols());
    if (kg != 0) nondeg = false;
    Vec xs = g.s(a), xt = g.t(a);
    int ks = unit_kernel_dim(xs, "source of arrow");
    int kt = unit_kernel_dim(xt, "target of arrow");
    bool ok = 2 * kg == ks + kt;
    dirac.update(ok ? 0.0 : 1.0, a);
    if (!ok) {
      ++rep.dirac_type_violations;
      if (!rep.dirac_type_witness) rep.dirac_type_witness = ks >= kt ? xs : xt;
    }
  }
  dirac.value = rep.dirac_type_violations;
  rep.residuals["dirac_type"] = dirac;

  auto ok = [&](const char* key) { return rep.residuals[key].value <= residual_tol; };
  bool mult = ok("multiplicative");
  bool closed = ok("rel_closed");
  rep.flags["is_multiplicative"] = mult;
  rep.flags["is_rel_closed"] = closed;
  rep.flags["is_dirac_type"] = rep.dirac_type_violations == 0;
  rep.flags["is_robust"] = robust;
  rep.flags["is_presymplectic"] = robust && nn == 2 * n && mult && closed;
  rep.flags["is_over_symplectic"] = over && mult && closed;
  rep.flags["is_nondegenerate"] = nondeg;
  return rep;
}

nlohmann::json to_json(const ClassificationReport& r) {
  nlohmann::json j;
  for (const auto& [k, v] : r.flags) j["flags"][k] = v;
  nlohmann::json dims = nlohmann::json::array();
  for (const auto& u : r.units)
    dims.push_back({{"x", to_std(u.x)},
                    {"ker", u.ker},
                    {"ker_tm", u.ker_tm},
                    {"ker_ds", u.ker_ds},
                    {"isotropy", u.isotropy}});
  j["dims"] = dims;
  for (const auto& [k, v] : r.residuals) {
    j["residuals"][k] = v.value;
    j["worst_points"][k] = to_std(v.worst_point);
  }
  j["indeterminate"] = r.indeterminate;
  if (r.dirac_type_witness) j["dirac_type_witness"] = to_std(*r.dirac_type_witness);
  return j;
}

GroupoidForm gauge(const ChartGroupoid& g, const GroupoidForm& f, const Form& b) {
  GroupoidForm out;
  out.omega = f.omega + pullback(g.t, b) - pullback(g.s, b);
  Form db = b.dim() >= 3 ? ext_d(b) : zero_form(b.dim(), 3);
  out.phi = f.phi.valid() ? f.phi - db : (-1.0) * db;
  if (f.orbit.valid()) out.orbit = f.orbit + b;
  return out;
}

std::pair<ChartGroupoid, GroupoidForm> pair_groupoid(const Form& omega_m, const Form& phi,
                                                     const Vec& lo, const Vec& hi) {
  const int n = omega_m.dim();
  ChartGroupoid g;
  g.name = "pair";
  g.total_dim = 2 * n;
  g.base_dim = n;
  g.t = coordinate_slice(2 * n, 0, n);
  g.s = coordinate_slice(2 * n, n, n);
  g.unit = make_map(n, 2 * n, [n](const auto& x) {
    using T = scalar_of<decltype(x)>;
    VecX<T> out(2 * n);
    out << x, x;
    return out;
  });
  g.inverse = make_map(2 * n, 2 * n, [n](const auto& a) {
    using T = scalar_of<decltype(a)>;
    VecX<T> out(2 * n);
    out << a.tail(n), a.head(n);
    return out;
  });
  g.mult = make_map(4 * n, 2 * n, [n](const auto& p) {
    using T = scalar_of<decltype(p)>;
    VecX<T> out(2 * n);
    out << p.head(n), p.tail(n);
    return out;
  });
  auto repeat = [](const Vec& v, int k) {
    Vec out(v.size() * k);
    for (int i = 0; i < k; ++i) out.segment(i * v.size(), v.size()) = v;
    return out;
  };
  // (x, y, z) ↦ ((x, y), (y, z)).
  g.pairs = {make_map(3 * n, 4 * n,
                      [n](const auto& q) {
                        using T = scalar_of<decltype(q)>;
                        VecX<T> out(4 * n);
                        out << q.segment(0, n), q.segment(n, n), q.segment(n, n), q.segment(2 * n, n);
                        return out;
                      }),
             repeat(lo, 3), repeat(hi, 3)};
  g.triples = {make_map(4 * n, 6 * n,
                        [n](const auto& q) {
                          using T = scalar_of<decltype(q)>;
                          VecX<T> out(6 * n);
                          out << q.segment(0, n), q.segment(n, n), q.segment(n, n),
                              q.segment(2 * n, n), q.segment(2 * n, n), q.segment(3 * n, n);
                          return out;
                        }),
               repeat(lo, 4), repeat(hi, 4)};
  g.arrows = box_sampler(repeat(lo, 2), repeat(hi, 2));
  g.bases = box_sampler(lo, hi);

  GroupoidForm f;
  f.omega = pullback(g.t, omega_m) - pullback(g.s, omega_m);
  f.phi = phi;
  f.orbit = omega_m;
  return {g, f};
}

namespace {
template <class T>
VecX<T> rotate(const T& tau, const T& x, const T& y) {
  using std::cos;
  using std::sin;
  VecX<T> out(2);
  out << x * cos(tau) - y * sin(tau), x * sin(tau) + y * cos(tau);
  return out;
}
}  // namespace

std::pair<ChartGroupoid, GroupoidForm> rotation_flow_groupoid() {
  ChartGroupoid g;
  g.name = "rotation-flow";
  g.total_dim = 3;
  g.base_dim = 2;
  g.s = coordinate_slice(3, 1, 2);
  g.t = make_map(3, 2, [](const auto& a) { return rotate(a[0], a[1], a[2]); });
  g.unit = make_map(2, 3, [](const auto& x) {
    using T = scalar_of<decltype(x)>;
    VecX<T> out(3);
    out << T(0.0), x[0], x[1];
    return out;
  });
  g.inverse = make_map(3, 3, [](const auto& a) {
    using T = scalar_of<decltype(a)>;
    VecX<T> out(3);
    out << -a[0], rotate(a[0], a[1], a[2]);
    return out;
  });
  g.mult = make_map(6, 3, [](const auto& p) {
    using T = scalar_of<decltype(p)>;
    VecX<T> out(3);
    out << p[0] + p[3], p[4], p[5];
    return out;
  });
  // (τ1, τ2, x, y) ↦ ((τ1, R(τ2)p), (τ2, p)).
  g.pairs.map = make_map(4, 6, [](const auto& q) {
    using T = scalar_of<decltype(q)>;
    VecX<T> out(6);
    out << q[0], rotate(q[1], q[2], q[3]), q[1], q[2], q[3];
    return out;
  });
  g.pairs.lo = Vec::Constant(4, -1.5);
  g.pairs.hi = Vec::Constant(4, 1.5);
  g.triples.map = make_map(5, 9, [](const auto& q) {
    using T = scalar_of<decltype(q)>;
    VecX<T> out(9);
    out << q[0], rotate(T(q[1] + q[2]), q[3], q[4]), q[1], rotate(q[2], q[3], q[4]), q[2], q[3], q[4];
    return out;
  });
  g.triples.lo = Vec::Constant(5, -1.5);
  g.triples.hi = Vec::Constant(5, 1.5);
  g.arrows = box_sampler(Vec::Constant(3, -1.5), Vec::Constant(3, 1.5));
  // Base points in an annulus around S¹, parametrized by (angle, radius).
  g.bases.map = make_map(2, 2, [](const auto& q) {
    using T = scalar_of<decltype(q)>;
    using std::cos;
    using std::sin;
    VecX<T> out(2);
    out << q[1] * cos(q[0]), q[1] * sin(q[0]);
    return out;
  });
  g.bases.lo = Vec(2);
  g.bases.lo << -M_PI, 0.5;
  g.bases.hi = Vec(2);
  g.bases.hi << M_PI, 1.5;
  // Arrows leaving or reaching the two points of S¹ where θ vanishes.
  for (double tau : {0.7, -1.1, 2.0}) {
    for (double sx : {1.0, -1.0}) {
      Vec a(3);
      a << tau, sx, 0.0;
      g.probe_arrows.push_back(a);
      Vec back = rotate<double>(-tau, sx, 0.0);
      Vec b(3);
      b << tau, back[0], back[1];
      g.probe_arrows.push_back(b);
    }
  }

  Form theta = form_from_strings(Chart(2), 2, {{"12", "x2"}});
  GroupoidForm f;
  f.omega = pullback(g.t, theta) - pullback(g.s, theta);
  return {g, f};
}

}  // namespace dirac
