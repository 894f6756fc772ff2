#include "dirac/realization.hpp"

namespace dirac {

namespace {

// dη + μ*φ as a component vector; empty when P has no 3-forms.
double twisted_closedness(const Form& eta, const SmoothMap& mu, const Form& phi, const Vec& p) {
  if (eta.dim() < 3) return 0.0;
  Form f = ext_d(eta);
  if (phi.valid()) f = f + pullback(mu, phi);
  return form_components(f, p).lpNorm<Eigen::Infinity>();
}

Mat stack_rows(const Mat& a, const Mat& b) {
  Mat out(a.rows() + b.rows(), a.cols());
  out << a, b;
  return out;
}

}  // namespace

std::vector<Vec> solve_action(const RealizationData& r, const Vec& p, double tol) {
  Vec x = r.mu(p);
  Mat j = jacobian<double>(r.mu, p);
  Mat omega = form_matrix(r.eta, p);
  Mat a = stack_rows(j, omega.transpose());
  if (null_space(a).cols() > 0)
    throw DegenerateRealizationError("degenerate realization at " + format_point(p));
  Eigen::ColPivHouseholderQR<Mat> qr(a);
  std::vector<Vec> out;
  for (const auto& s : r.target.frame) {
    PairedVector l = s.at(x);
    Vec b(a.rows());
    b << l.x, j.transpose() * l.xi;
    Vec sol = qr.solve(b);
    double err = (a * sol - b).lpNorm<Eigen::Infinity>();
    if (err > tol * std::max(1.0, b.lpNorm<Eigen::Infinity>()))
      throw NotDiracMapError("not a Dirac map at " + format_point(p));
    out.push_back(sol);
  }
  return out;
}

bool RealizationReport::pass(double tol) const {
  return unsolvable == 0 && degenerate == 0 && closedness.value <= tol && solve.value <= tol &&
         kernel_map.value <= tol;
}

RealizationReport realization_check(const RealizationData& r, const std::vector<Vec>& samples,
                                    double tol) {
  RealizationReport rep;
  for (const auto& p : samples) {
    rep.closedness.update(twisted_closedness(r.eta, r.mu, r.phi, p), p);
    Mat j = jacobian<double>(r.mu, p);
    Mat omega = form_matrix(r.eta, p);
    Vec x = r.mu(p);

    Mat ker = null_space(omega);
    Mat image = j * ker;
    double kerr = numerical_rank(image) == ker.cols()
                      ? subspace_distance(image, induced(r.target.at(x)).kernel)
                      : 1.0;
    rep.kernel_map.update(kerr, p);

    try {
      std::vector<Vec> acts = solve_action(r, p, tol);
      Mat a = stack_rows(j, omega.transpose());
      double worst = 0.0;
      for (std::size_t k = 0; k < acts.size(); ++k) {
        PairedVector l = r.target.frame[k].at(x);
        Vec b(a.rows());
        b << l.x, j.transpose() * l.xi;
        worst = std::max(worst, (a * acts[k] - b).lpNorm<Eigen::Infinity>());
        rep.max_action_norm = std::max(rep.max_action_norm, acts[k].norm());
      }
      rep.solve.update(worst, p);
      rep.actions.push_back(std::move(acts));
    } catch (const DegenerateRealizationError& e) {
      ++rep.degenerate;
      if (!rep.failure_point) {
        rep.failure_point = p;
        rep.failure = e.what();
      }
      rep.actions.emplace_back();
    } catch (const NotDiracMapError& e) {
      ++rep.unsolvable;
      if (!rep.failure_point) {
        rep.failure_point = p;
        rep.failure = e.what();
      }
      rep.actions.emplace_back();
    }
  }
  return rep;
}

QuasiHamResiduals quasi_ham_check(const QuasiHamData& q, const std::vector<Vec>& samples,
                                  double tol) {
  const MatrixGroup& h = q.group;
  const int d = h.dim();
  Form phi = cartan_form(h);
  auto rs = cartan_rho_star(h);
  CartanTriple conj = conjugation_triple(h);
  std::vector<Form> r2_forms, inv_forms;
  std::vector<SmoothMap> rho_h;
  for (int i = 0; i < d; ++i) {
    r2_forms.push_back(interior(q.generators[i], q.eta) - pullback(q.mu, rs[i]));
    inv_forms.push_back(lie_derivative(q.generators[i], q.eta));
    rho_h.push_back(generator(conj, i));
  }
  QuasiHamResiduals out;
  for (const auto& p : samples) {
    out.r1.update(twisted_closedness(q.eta, q.mu, phi, p), p);
    Vec u = q.mu(p);
    Mat j = jacobian<double>(q.mu, p);
    double w2 = 0.0, winv = 0.0, weq = 0.0;
    Mat gens(q.p_dim(), d);
    for (int i = 0; i < d; ++i) {
      gens.col(i) = q.generators[i](p);
      w2 = std::max(w2, covector(r2_forms[i], p).lpNorm<Eigen::Infinity>());
      if (q.p_dim() >= 2) winv = std::max(winv, form_components(inv_forms[i], p).lpNorm<Eigen::Infinity>());
      weq = std::max(weq, (j * gens.col(i) - rho_h[i](u)).lpNorm<Eigen::Infinity>());
    }
    out.r2.update(w2, p);
    out.invariance.update(winv, p);
    out.equivariance.update(weq, p);

    Mat shifted = h.ad_matrix<double>(h.exp<double>(u)) + Mat::Identity(d, d);
    Mat omega = form_matrix(q.eta, p);
    RankInfo ri = rank_info(shifted, tol);
    RankInfo re = rank_info(omega, tol);
    if (ri.indeterminate || re.indeterminate) {
      out.rank_unstable = true;
      out.rank_diagnostics.push_back({"Ad+1 at " + format_point(p), ri});
      out.rank_diagnostics.push_back({"eta at " + format_point(p), re});
    }
    Mat expected = gens * null_space(shifted, tol);
    out.r3.update(subspace_distance(null_space(omega, tol), expected, tol), p);
  }
  return out;
}

CrosscheckReport equivalence_crosscheck(const QuasiHamData& q, const std::vector<Vec>& samples,
                                        double tol) {
  RealizationData r{q.eta, q.mu, cartan_dirac_field(q.group), cartan_form(q.group)};
  CrosscheckReport out;
  out.realization = realization_check(r, samples, tol);
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const auto& acts = out.realization.actions[s];
    if (acts.empty()) {
      out.generators.update(1.0, samples[s]);
      continue;
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < acts.size(); ++i)
      worst = std::max(worst, (acts[i] - q.generators[i](samples[s])).lpNorm<Eigen::Infinity>());
    out.generators.update(worst, samples[s]);
  }
  return out;
}

Residual action_compatibility_residual(const ChartGroupoid& g, const GroupoidForm& f,
                                       const Form& eta, const GroupoidActionData& a,
                                       const std::vector<Vec>& params) {
  const int n = g.total_dim;
  const int p = eta.dim();
  SmoothMap arrow = compose(coordinate_slice(n + p, 0, n), a.fibered);
  SmoothMap point = compose(coordinate_slice(n + p, n, p), a.fibered);
  SmoothMap moved = compose(a.act, a.fibered);
  Residual res;
  for (const auto& q : params) {
    Mat lhs = pullback_matrix(moved, eta, q);
    Mat rhs = pullback_matrix(arrow, f.omega, q) + pullback_matrix(point, eta, q);
    res.update(max_abs(lhs - rhs), q);
  }
  return res;
}

GroupoidActionData pair_self_action(const ChartGroupoid& g) {
  const int n = g.base_dim;
  GroupoidActionData a;
  // (x, y) ↦ ((x, y), y); the arrow (x, y) carries y to x.
  a.fibered = make_map(2 * n, 3 * n, [n](const auto& q) {
    using T = scalar_of<decltype(q)>;
    VecX<T> out(3 * n);
    out << q, q.tail(n);
    return out;
  });
  a.act = coordinate_slice(3 * n, 0, n);
  a.params = g.arrows;
  return a;
}

QuasiHamData rotation_plane_qham(double factor) {
  QuasiHamData q{MatrixGroup::u1(), constant_two_form((Mat(2, 2) << 0, 1, -1, 0).finished()), {}, {},
                 box_sampler(Vec::Constant(2, -1.0), Vec::Constant(2, 1.0))};
  q.mu = make_map(2, 1, [factor](const auto& p) {
    using T = scalar_of<decltype(p)>;
    VecX<T> out(1);
    out[0] = T(factor) * (p[0] * p[0] + p[1] * p[1]);
    return out;
  });
  q.generators.push_back(make_map(2, 2, [](const auto& p) {
    using T = scalar_of<decltype(p)>;
    VecX<T> out(2);
    out << p[1], -p[0];
    return out;
  }));
  return q;
}

RealizationData identity_realization(const Form& omega_m) {
  const int n = omega_m.dim();
  Form phi = n >= 3 ? (-1.0) * ext_d(omega_m) : Form();
  return {omega_m, identity_map(n), graph_field(omega_m), phi};
}

}  // namespace dirac
