#include "dirac/pathspace.hpp"

#include <cmath>

namespace dirac {

namespace {

Vec rho_of(const AlgebroidPresentation& alg, const Vec& x, const Vec& a) {
  Vec out = Vec::Zero(alg.dim());
  for (int k = 0; k < alg.rank; ++k)
    if (a[k] != 0.0) out += a[k] * alg.anchor[k](x);
  return out;
}

Vec rho_star_of(const AlgebroidPresentation& alg, const Vec& x, const Vec& a) {
  Vec out = Vec::Zero(alg.dim());
  for (int k = 0; k < alg.rank; ++k)
    if (a[k] != 0.0) out += a[k] * covector(alg.rho_star[k], x);
  return out;
}

Vec time_point(double t) { return Vec::Constant(1, t); }

Vec time_and_space(double t, const Vec& x) {
  Vec out(1 + x.size());
  out << t, x;
  return out;
}

Vec time_derivative(const SmoothMap& f, double t) {
  return directional<double>(f, time_point(t), Vec::Ones(1));
}

}  // namespace

AlgebroidPresentation tangent_algebroid(const Form& omega_m) {
  const int n = omega_m.dim();
  AlgebroidPresentation alg;
  alg.rank = n;
  for (int i = 0; i < n; ++i) {
    SmoothMap e = constant_field(n, Vec::Unit(n, i));
    alg.anchor.push_back(e);
    alg.rho_star.push_back(interior(e, omega_m));
  }
  alg.structure = zero_structure(n, n);
  return alg;
}

double anchor_bracket_residual(const AlgebroidPresentation& alg, const std::vector<Vec>& samples) {
  double worst = 0.0;
  for (int i = 0; i < alg.rank; ++i)
    for (int j = i + 1; j < alg.rank; ++j) {
      SmoothMap br = lie_bracket(alg.anchor[i], alg.anchor[j]);
      for (const auto& x : samples) {
        Vec lhs = rho_of(alg, x, alg.bracket_coeffs(i, j, x));
        worst = std::max(worst, (lhs - br(x)).lpNorm<Eigen::Infinity>());
      }
    }
  return worst;
}

std::vector<double> trapezoid_weights(int intervals) {
  std::vector<double> w(intervals + 1, 1.0 / intervals);
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

DiscretizedAPath sample_path(const SmoothMap& gamma, const SmoothMap& a, int intervals) {
  DiscretizedAPath p;
  for (int i = 0; i <= intervals; ++i) {
    Vec t = time_point(static_cast<double>(i) / intervals);
    p.gamma.push_back(gamma(t));
    p.a.push_back(a(t));
  }
  return p;
}

DiscretizedAPath tangent_path(const SmoothMap& gamma, int intervals) {
  DiscretizedAPath p;
  for (int i = 0; i <= intervals; ++i) {
    double t = static_cast<double>(i) / intervals;
    p.gamma.push_back(gamma(time_point(t)));
    p.a.push_back(time_derivative(gamma, t));
  }
  return p;
}

double a_path_residual(const AlgebroidPresentation& alg, const DiscretizedAPath& path) {
  double worst = 0.0;
  const double dt = path.dt();
  for (int i = 1; i < path.intervals(); ++i) {
    Vec diff = (path.gamma[i + 1] - path.gamma[i - 1]) / (2.0 * dt);
    worst = std::max(worst, (rho_of(alg, path.gamma[i], path.a[i]) - diff).lpNorm<Eigen::Infinity>());
  }
  return worst;
}

PathTangent tangent_probe(const DiscretizedAPath& path, const SmoothMap& x_prime) {
  PathTangent v;
  for (int i = 0; i <= path.intervals(); ++i) {
    double t = path.time(i);
    v.dgamma.push_back(x_prime(time_point(t)));
    v.da.push_back(time_derivative(x_prime, t));
  }
  return v;
}

PathTangent scaled(const PathTangent& v, double c) {
  PathTangent out = v;
  for (auto& x : out.dgamma) x *= c;
  for (auto& x : out.da) x *= c;
  return out;
}

DiscretizedAPath shifted(const DiscretizedAPath& path, const PathTangent& v, double h) {
  DiscretizedAPath out = path;
  for (std::size_t i = 0; i < out.gamma.size(); ++i) {
    out.gamma[i] += h * v.dgamma[i];
    out.a[i] += h * v.da[i];
  }
  return out;
}

SmoothMap GaugeParameter::section() const {
  SmoothMap e = profile;
  return make_map(e.in_dim(), e.out_dim(), [e](const auto& p) {
    using T = scalar_of<decltype(p)>;
    T chi = p[0] * (T(1.0) - p[0]);
    return VecX<T>(chi * e(p));
  });
}

double omega_phi(const AlgebroidPresentation& alg, const DiscretizedAPath& path, const PathTangent& v,
                 const PathTangent& w, const Form& phi) {
  if (!phi.valid()) return 0.0;
  auto wt = trapezoid_weights(path.intervals());
  double acc = 0.0;
  for (int i = 0; i <= path.intervals(); ++i) {
    const Vec& x = path.gamma[i];
    acc += wt[i] * phi.at(x, {rho_of(alg, x, path.a[i]), v.dgamma[i], w.dgamma[i]});
  }
  return acc;
}

double sigma_tilde(const AlgebroidPresentation& alg, const DiscretizedAPath& path, const PathTangent& x) {
  if (static_cast<int>(alg.rho_star.size()) != alg.rank)
    throw std::invalid_argument("sigma_tilde: algebroid has no rho_star");
  auto wt = trapezoid_weights(path.intervals());
  double acc = 0.0;
  for (int i = 0; i <= path.intervals(); ++i)
    acc += wt[i] * rho_star_of(alg, path.gamma[i], path.a[i]).dot(x.dgamma[i]);
  return acc;
}

double fd_step(const DiscretizedAPath& path) {
  double amp = 0.0;
  for (const auto& g : path.gamma) amp = std::max(amp, g.lpNorm<Eigen::Infinity>());
  for (const auto& a : path.a) amp = std::max(amp, a.lpNorm<Eigen::Infinity>());
  return 1e-4 * (1.0 + amp);
}

double omega_tilde(const AlgebroidPresentation& alg, const DiscretizedAPath& path, const PathTangent& v,
                   const PathTangent& w, double h) {
  if (!(h > 1e-12)) throw std::invalid_argument("omega_tilde: finite-difference step underflow");
  double dv = (sigma_tilde(alg, shifted(path, v, h), w) - sigma_tilde(alg, shifted(path, v, -h), w)) / (2 * h);
  double dw = (sigma_tilde(alg, shifted(path, w, h), v) - sigma_tilde(alg, shifted(path, w, -h), v)) / (2 * h);
  return -(dv - dw);
}

PathTangent gauge_vector(const AlgebroidPresentation& alg, const DiscretizedAPath& path,
                         const GaugeParameter& eta, const Mat& extension) {
  const int n = alg.dim();
  const int r = alg.rank;
  SmoothMap sec = eta.section();
  PathTangent out;
  for (int i = 0; i <= path.intervals(); ++i) {
    const Vec& x = path.gamma[i];
    const Vec& a = path.a[i];
    Vec p = time_and_space(path.time(i), x);
    Vec e = sec(p);
    Mat jac = jacobian<double>(sec, p);
    Vec rho_e = rho_of(alg, x, e);
    Vec br = jac.rightCols(n) * rho_of(alg, x, a);
    for (int a_i = 0; a_i < r; ++a_i)
      for (int b_j = 0; b_j < r; ++b_j) {
        if (a[a_i] == 0.0 || e[b_j] == 0.0) continue;
        br += a[a_i] * e[b_j] * alg.bracket_coeffs(a_i, b_j, x);
      }
    // [ξ₀, η] picks up −ρ(η)(ξ₀); moving the base point along ρ(η) adds Dξ₀·ρ(η).
    Vec transport = Vec::Zero(r);
    if (extension.size() > 0) {
      br -= extension * rho_e;
      transport = extension * rho_e;
    }
    Vec da = jac.col(0) + br + transport;
    out.dgamma.push_back(rho_e);
    out.da.push_back(da);
  }
  return out;
}

BasicnessReport basicness_residual(const AlgebroidPresentation& alg, const DiscretizedAPath& path,
                                   const GaugeParameter& eta, const Form& phi,
                                   const std::vector<PathTangent>& probes, double h) {
  BasicnessReport rep;
  PathTangent xe = gauge_vector(alg, path, eta);
  auto wt = trapezoid_weights(path.intervals());
  SmoothMap sec = eta.section();
  double contraction = sigma_tilde(alg, path, xe);
  for (int i = 0; i <= path.intervals(); ++i) {
    Vec e = sec(time_and_space(path.time(i), path.gamma[i]));
    contraction += wt[i] * rho_star_of(alg, path.gamma[i], e).dot(rho_of(alg, path.gamma[i], path.a[i]));
  }
  rep.sigma_contraction = std::abs(contraction);
  for (const auto& x : probes) {
    double wphi = omega_phi(alg, path, xe, x, phi);
    rep.basicness = std::max(rep.basicness, std::abs(omega_tilde(alg, path, xe, x, h) + wphi));
    if (phi.valid()) {
      double direct = 0.0;
      for (int i = 0; i <= path.intervals(); ++i) {
        const Vec& g = path.gamma[i];
        Vec e = sec(time_and_space(path.time(i), g));
        direct += wt[i] * phi.at(g, {rho_of(alg, g, path.a[i]), rho_of(alg, g, e), x.dgamma[i]});
      }
      rep.lemma52 = std::max(rep.lemma52, std::abs(wphi - direct));
    }
  }
  return rep;
}

double path_boundary_identity_residual(const SmoothMap& gamma, const SmoothMap& x_prime,
                                       const SmoothMap& u, int intervals, double h) {
  auto wt = trapezoid_weights(intervals);
  std::vector<Vec> g, gdot, xp, xpdot;
  for (int i = 0; i <= intervals; ++i) {
    double t = static_cast<double>(i) / intervals;
    g.push_back(gamma(time_point(t)));
    gdot.push_back(time_derivative(gamma, t));
    xp.push_back(x_prime(time_point(t)));
    xpdot.push_back(time_derivative(x_prime, t));
  }
  const int n = static_cast<int>(g.front().size());
  auto functional = [&](double eps) {
    double acc = 0.0;
    for (int i = 0; i <= intervals; ++i) {
      Vec moved = g[i] + eps * xp[i];
      acc += wt[i] * u(time_and_space(static_cast<double>(i) / intervals, moved)).dot(gdot[i] + eps * xpdot[i]);
    }
    return acc;
  };
  double lie = (functional(h) - functional(-h)) / (2 * h);
  double integral = 0.0;
  for (int i = 0; i <= intervals; ++i) {
    Mat jac = jacobian<double>(u, time_and_space(static_cast<double>(i) / intervals, g[i]));
    Mat d = jac.rightCols(n);
    double contraction = xp[i].dot(d * gdot[i]) - gdot[i].dot(d * xp[i]);
    integral += wt[i] * (contraction + jac.col(0).dot(xp[i]));
  }
  double boundary = u(time_and_space(1.0, g.back())).dot(xp.back()) -
                    u(time_and_space(0.0, g.front())).dot(xp.front());
  return std::abs(lie + integral - boundary);
}

double endpoint_residual(const AlgebroidPresentation& alg, const DiscretizedAPath& path,
                         const Form& phi, const Form& omega_m, const std::vector<PathTangent>& probes,
                         double h) {
  double worst = 0.0;
  const int last = path.intervals();
  for (std::size_t i = 0; i < probes.size(); ++i)
    for (std::size_t j = i + 1; j < probes.size(); ++j) {
      const auto& v = probes[i];
      const auto& w = probes[j];
      double lhs = omega_tilde(alg, path, v, w, h) + omega_phi(alg, path, v, w, phi);
      double ends = omega_m.at(path.gamma[last], {v.dgamma[last], w.dgamma[last]}) -
                    omega_m.at(path.gamma[0], {v.dgamma[0], w.dgamma[0]});
      worst = std::max(worst, std::abs(lhs + ends));
    }
  return worst;
}

double path_rel_closed_residual(const AlgebroidPresentation& alg, const DiscretizedAPath& path,
                                const Form& phi, const std::vector<PathTangent>& probes, double h) {
  auto total = [&](const DiscretizedAPath& p, const PathTangent& v, const PathTangent& w) {
    return omega_tilde(alg, p, v, w, h) + omega_phi(alg, p, v, w, phi);
  };
  auto deriv = [&](const PathTangent& along, const PathTangent& v, const PathTangent& w) {
    return (total(shifted(path, along, h), v, w) - total(shifted(path, along, -h), v, w)) / (2 * h);
  };
  double worst = 0.0;
  const int last = path.intervals();
  for (std::size_t i = 0; i < probes.size(); ++i)
    for (std::size_t j = i + 1; j < probes.size(); ++j)
      for (std::size_t k = j + 1; k < probes.size(); ++k) {
        const auto &u = probes[i], &v = probes[j], &w = probes[k];
        double d = deriv(u, v, w) - deriv(v, u, w) + deriv(w, u, v);
        double ends = 0.0;
        if (phi.valid())
          ends = phi.at(path.gamma[last], {u.dgamma[last], v.dgamma[last], w.dgamma[last]}) -
                 phi.at(path.gamma[0], {u.dgamma[0], v.dgamma[0], w.dgamma[0]});
        worst = std::max(worst, std::abs(d - ends));
      }
  return worst;
}

Convergence convergence_study(const std::function<double(int)>& residual, const std::vector<int>& grids) {
  Convergence c;
  c.grids = grids;
  for (int n : grids) c.residuals.push_back(residual(n));
  c.monotone = true;
  for (std::size_t i = 1; i < c.residuals.size(); ++i)
    if (!(c.residuals[i] < c.residuals[i - 1])) c.monotone = false;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(grids.size());
  for (std::size_t i = 0; i < grids.size(); ++i) {
    double x = std::log(static_cast<double>(grids[i]));
    double y = -std::log(std::max(c.residuals[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  c.order = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return c;
}

}  // namespace dirac
