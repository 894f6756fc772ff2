#include "dirac/geometry.hpp"

#include <set>

namespace dirac {

SmoothMap compose(const SmoothMap& f, const SmoothMap& g) {
  if (g.out_dim() != f.in_dim()) throw std::invalid_argument("compose: dimension mismatch");
  return make_map(g.in_dim(), f.out_dim(), [f, g](const auto& x) {
    using T = scalar_of<decltype(x)>;
    return VecX<T>(f(g(x)));
  });
}

SmoothMap affine_map(const Mat& a, const Vec& b) {
  if (a.rows() != b.size()) throw std::invalid_argument("affine_map: dimension mismatch");
  return make_map(static_cast<int>(a.cols()), static_cast<int>(a.rows()), [a, b](const auto& x) {
    using T = scalar_of<decltype(x)>;
    VecX<T> y = cast_mat<T>(a) * x + cast_vec<T>(b);
    return y;
  });
}

SmoothMap linear_map(const Mat& a) { return affine_map(a, Vec::Zero(a.rows())); }

SmoothMap identity_map(int n) {
  return make_map(n, n, [](const auto& x) {
    using T = scalar_of<decltype(x)>;
    return VecX<T>(x);
  });
}

SmoothMap coordinate_slice(int in, int start, int len) {
  if (start < 0 || start + len > in) throw std::invalid_argument("coordinate_slice out of range");
  return make_map(in, len, [start, len](const auto& x) {
    using T = scalar_of<decltype(x)>;
    return VecX<T>(x.segment(start, len));
  });
}

SmoothMap constant_map(int in, const Vec& value) {
  return make_map(in, static_cast<int>(value.size()), [value](const auto& x) {
    using T = scalar_of<decltype(x)>;
    return cast_vec<T>(value);
  });
}

SmoothMap concat(const SmoothMap& f, const SmoothMap& g) {
  if (f.in_dim() != g.in_dim()) throw std::invalid_argument("concat: input mismatch");
  return make_map(f.in_dim(), f.out_dim() + g.out_dim(), [f, g](const auto& x) {
    using T = scalar_of<decltype(x)>;
    VecX<T> a = f(x);
    VecX<T> b = g(x);
    VecX<T> out(a.size() + b.size());
    out << a, b;
    return out;
  });
}

SmoothMap sum_maps(const SmoothMap& f, const SmoothMap& g, double a, double b) {
  if (f.in_dim() != g.in_dim() || f.out_dim() != g.out_dim())
    throw std::invalid_argument("sum_maps: dimension mismatch");
  return make_map(f.in_dim(), f.out_dim(), [f, g, a, b](const auto& x) {
    using T = scalar_of<decltype(x)>;
    VecX<T> out = T(a) * f(x) + T(b) * g(x);
    return out;
  });
}

SmoothMap expr_map(const std::vector<Expr>& exprs, int in) {
  for (const auto& e : exprs)
    if (e.arity() != in) throw std::invalid_argument("expr_map: arity mismatch");
  return make_map(in, static_cast<int>(exprs.size()), [exprs](const auto& x) {
    using T = scalar_of<decltype(x)>;
    VecX<T> out(exprs.size());
    for (std::size_t i = 0; i < exprs.size(); ++i) out[i] = exprs[i].eval(x);
    return out;
  });
}

SmoothMap expr_map(const std::vector<std::string>& sources, const std::vector<std::string>& vars) {
  std::vector<Expr> exprs;
  for (const auto& s : sources) exprs.push_back(parse(s, vars));
  return expr_map(exprs, static_cast<int>(vars.size()));
}

Chart::Chart(std::vector<std::string> n) : names(std::move(n)) {
  std::set<std::string> seen(names.begin(), names.end());
  if (seen.size() != names.size()) throw std::invalid_argument("chart variable names must be distinct");
}

std::vector<std::vector<int>> multi_indices(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    out.push_back(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

Form zero_form(int n, int k) {
  return make_form(n, k, [](const auto& x, auto) {
    using T = scalar_of<decltype(x)>;
    return T(0.0);
  });
}

Form constant_two_form(const Mat& m) {
  const int n = static_cast<int>(m.rows());
  return make_form(n, 2, [m](const auto& x, auto vs) {
    using T = scalar_of<decltype(x)>;
    T out = vs[0].dot(cast_mat<T>(m) * vs[1]);
    return out;
  });
}

Form constant_covector(const Vec& xi) {
  return make_form(static_cast<int>(xi.size()), 1, [xi](const auto& x, auto vs) {
    using T = scalar_of<decltype(x)>;
    T out = cast_vec<T>(xi).dot(vs[0]);
    return out;
  });
}

Form component_form(int n, int k, std::vector<std::vector<int>> indices, std::vector<Expr> coeffs) {
  if (indices.size() != coeffs.size()) throw std::invalid_argument("component_form: size mismatch");
  for (const auto& idx : indices) {
    if (static_cast<int>(idx.size()) != k) throw std::invalid_argument("component_form: index length");
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (idx[i] < 0 || idx[i] >= n) throw std::invalid_argument("component_form: index out of range");
      if (i > 0 && idx[i] <= idx[i - 1])
        throw std::invalid_argument("component_form: indices must be strictly increasing");
    }
  }
  for (const auto& c : coeffs)
    if (c.arity() != n) throw std::invalid_argument("component_form: coefficient arity");
  return make_form(n, k, [k, indices, coeffs](const auto& x, auto vs) {
    using T = scalar_of<decltype(x)>;
    T acc(0.0);
    MatX<T> m(k, k);
    for (std::size_t c = 0; c < indices.size(); ++c) {
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) m(i, j) = vs[j][indices[c][i]];
      acc = acc + coeffs[c].eval(x) * det_small(m);
    }
    return acc;
  });
}

Form form_from_strings(const Chart& chart, int k, const std::map<std::string, std::string>& comps) {
  std::vector<std::vector<int>> indices;
  std::vector<Expr> coeffs;
  for (const auto& [key, src] : comps) {
    std::vector<int> idx;
    for (char ch : key) {
      if (ch < '1' || ch > '9') throw std::invalid_argument("bad form component key '" + key + "'");
      idx.push_back(ch - '1');
    }
    if (static_cast<int>(idx.size()) != k)
      throw std::invalid_argument("form component key '" + key + "' has wrong degree");
    indices.push_back(idx);
    coeffs.push_back(parse(src, chart.names));
  }
  return component_form(chart.dim(), k, indices, coeffs);
}

SmoothMap field_from_strings(const Chart& chart, const std::vector<std::string>& comps) {
  if (static_cast<int>(comps.size()) != chart.dim())
    throw std::invalid_argument("vector field needs one component per coordinate");
  return expr_map(comps, chart.names);
}

Form ext_d(const Form& omega) {
  const int k = omega.degree();
  if (k + 1 > kMaxFormDegree) throw std::invalid_argument("exterior derivative: degree overflow");
  return make_form(omega.dim(), k + 1, [omega, k](const auto& x, auto vs) -> scalar_of<decltype(x)> {
    using T = scalar_of<decltype(x)>;
    if constexpr (!kLiftable<T>) {
      throw_depth();
    } else {
      T acc(0.0);
      std::vector<VecX<Jet<T>>> rest;
      for (int i = 0; i <= k; ++i) {
        rest.clear();
        for (int j = 0; j <= k; ++j)
          if (j != i) rest.push_back(lift<T>(vs[j]));
        Jet<T> val = omega(seed<T>(x, vs[i]), std::span<const VecX<Jet<T>>>(rest));
        acc = (i % 2 == 0) ? acc + val.d[0] : acc - val.d[0];
      }
      return acc;
    }
  });
}

Form interior(const SmoothMap& field, const Form& omega) {
  if (omega.degree() == 0) throw std::invalid_argument("interior product of a function");
  if (field.in_dim() != omega.dim() || field.out_dim() != omega.dim())
    throw std::invalid_argument("interior: dimension mismatch");
  return make_form(omega.dim(), omega.degree() - 1, [field, omega](const auto& x, auto vs) {
    using T = scalar_of<decltype(x)>;
    std::vector<VecX<T>> args;
    args.push_back(field(x));
    for (const auto& v : vs) args.push_back(v);
    return omega(x, std::span<const VecX<T>>(args));
  });
}

Form operator+(const Form& a, const Form& b) {
  if (a.dim() != b.dim() || a.degree() != b.degree()) throw std::invalid_argument("form sum mismatch");
  return make_form(a.dim(), a.degree(), [a, b](const auto& x, auto vs) { return a(x, vs) + b(x, vs); });
}

Form operator*(double c, const Form& a) {
  return make_form(a.dim(), a.degree(), [c, a](const auto& x, auto vs) {
    using T = scalar_of<decltype(x)>;
    return T(c) * a(x, vs);
  });
}

Form operator-(const Form& a, const Form& b) { return a + (-1.0) * b; }

Form lie_derivative(const SmoothMap& field, const Form& omega) {
  Form via_d = interior(field, ext_d(omega));
  if (omega.degree() == 0) return via_d;
  return ext_d(interior(field, omega)) + via_d;
}

Form pullback(const SmoothMap& f, const Form& omega) {
  if (f.out_dim() != omega.dim()) throw std::invalid_argument("pullback: dimension mismatch");
  return make_form(f.in_dim(), omega.degree(), [f, omega](const auto& x, auto vs) {
    using T = scalar_of<decltype(x)>;
    std::vector<VecX<T>> pushed;
    VecX<T> y = push_vectors<T>(f, x, vs, pushed);
    return omega(y, std::span<const VecX<T>>(pushed));
  });
}

Form pair(const Form& alpha, const SmoothMap& field) {
  if (alpha.degree() != 1) throw std::invalid_argument("pair: expected a 1-form");
  return interior(field, alpha);
}

SmoothMap lie_bracket(const SmoothMap& x, const SmoothMap& y) {
  if (x.in_dim() != y.in_dim() || x.out_dim() != x.in_dim() || y.out_dim() != y.in_dim())
    throw std::invalid_argument("lie_bracket: chart mismatch");
  return make_map(x.in_dim(), x.in_dim(), [x, y](const auto& p) {
    using T = scalar_of<decltype(p)>;
    VecX<T> xv = x(p);
    VecX<T> yv = y(p);
    VecX<T> out = directional<T>(y, p, xv) - directional<T>(x, p, yv);
    return out;
  });
}

SmoothMap constant_field(int n, const Vec& v) { return constant_map(n, v); }

Mat form_matrix(const Form& omega, const Vec& x) {
  if (omega.degree() != 2) throw std::invalid_argument("form_matrix: expected a 2-form");
  const int n = omega.dim();
  Mat m = Mat::Zero(n, n);
  Mat id = Mat::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      m(i, j) = omega.at(x, {Vec(id.col(i)), Vec(id.col(j))});
      m(j, i) = -m(i, j);
    }
  return m;
}

Vec covector(const Form& alpha, const Vec& x) {
  if (alpha.degree() != 1) throw std::invalid_argument("covector: expected a 1-form");
  const int n = alpha.dim();
  Vec out(n);
  Mat id = Mat::Identity(n, n);
  for (int i = 0; i < n; ++i) out[i] = alpha.at(x, {Vec(id.col(i))});
  return out;
}

double scalar_value(const Form& f, const Vec& x) {
  if (f.degree() != 0) throw std::invalid_argument("scalar_value: expected a function");
  return f.at(x, std::vector<Vec>{});
}

Vec form_components(const Form& omega, const Vec& x) {
  const int n = omega.dim();
  auto idx = multi_indices(n, omega.degree());
  Vec out(idx.size());
  Mat id = Mat::Identity(n, n);
  for (std::size_t c = 0; c < idx.size(); ++c) {
    std::vector<Vec> vs;
    for (int i : idx[c]) vs.push_back(id.col(i));
    out[c] = omega.at(x, vs);
  }
  return out;
}

Vec contract_two(const Form& phi, const Vec& x, const Vec& a, const Vec& b) {
  if (phi.degree() != 3) throw std::invalid_argument("contract_two: expected a 3-form");
  const int n = phi.dim();
  Vec out(n);
  Mat id = Mat::Identity(n, n);
  for (int m = 0; m < n; ++m) out[m] = phi.at(x, {a, b, Vec(id.col(m))});
  return out;
}

}  // namespace dirac
