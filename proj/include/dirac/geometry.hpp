#pragma once

#include <initializer_list>
#include <map>
#include <string>
#include <vector>

#include "dirac/smooth.hpp"

namespace dirac {

struct Chart {
  std::vector<std::string> names;

  Chart() = default;
  explicit Chart(std::vector<std::string> n);
  explicit Chart(int n) : Chart(default_variables(n)) {}
  int dim() const { return static_cast<int>(names.size()); }
};

inline constexpr int kMaxFormDegree = 4;

// Type-erased k-form: ω(x; v_1..v_k), multilinear and skew in the v's.
class Form {
 public:
  struct Impl {
    virtual ~Impl() = default;
    virtual double eval(const Vec& x, std::span<const Vec> vs) const = 0;
    virtual J1 eval(const VecX<J1>& x, std::span<const VecX<J1>> vs) const = 0;
    virtual J2 eval(const VecX<J2>& x, std::span<const VecX<J2>> vs) const = 0;
    virtual J3 eval(const VecX<J3>& x, std::span<const VecX<J3>> vs) const = 0;
  };

  Form() = default;
  Form(int n, int k, std::shared_ptr<const Impl> impl) : n_(n), k_(k), impl_(std::move(impl)) {}

  int dim() const { return n_; }
  int degree() const { return k_; }
  bool valid() const { return impl_ != nullptr; }

  template <class T>
  T operator()(const VecX<T>& x, std::span<const VecX<T>> vs) const {
    if (!impl_) throw std::logic_error("evaluating an empty form");
    if (x.size() != n_ || static_cast<int>(vs.size()) != k_)
      throw std::invalid_argument("form arity mismatch: expected point of dim " +
                                  std::to_string(n_) + " and " + std::to_string(k_) +
                                  " vectors");
    return impl_->eval(x, vs);
  }

  double at(const Vec& x, std::initializer_list<Vec> vs) const {
    std::vector<Vec> v(vs);
    return (*this)(x, std::span<const Vec>(v));
  }
  double at(const Vec& x, const std::vector<Vec>& vs) const {
    return (*this)(x, std::span<const Vec>(vs));
  }

 private:
  int n_ = 0;
  int k_ = 0;
  std::shared_ptr<const Impl> impl_;
};

template <class F>
class LambdaForm final : public Form::Impl {
 public:
  explicit LambdaForm(F f) : f_(std::move(f)) {}
  double eval(const Vec& x, std::span<const Vec> vs) const override { return f_(x, vs); }
  J1 eval(const VecX<J1>& x, std::span<const VecX<J1>> vs) const override { return f_(x, vs); }
  J2 eval(const VecX<J2>& x, std::span<const VecX<J2>> vs) const override { return f_(x, vs); }
  J3 eval(const VecX<J3>& x, std::span<const VecX<J3>> vs) const override { return f_(x, vs); }

 private:
  F f_;
};

template <class F>
Form make_form(int n, int k, F f) {
  if (k < 0 || k > kMaxFormDegree)
    throw std::invalid_argument("form degree " + std::to_string(k) + " unsupported");
  return Form(n, k, std::make_shared<const LambdaForm<F>>(std::move(f)));
}

template <class T>
T det_small(const MatX<T>& m) {
  const Eigen::Index k = m.rows();
  if (k == 0) return T(1.0);
  if (k == 1) return m(0, 0);
  if (k == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  T acc(0.0);
  for (Eigen::Index j = 0; j < k; ++j) {
    MatX<T> minor(k - 1, k - 1);
    for (Eigen::Index r = 1; r < k; ++r) {
      Eigen::Index cc = 0;
      for (Eigen::Index c = 0; c < k; ++c) {
        if (c == j) continue;
        minor(r - 1, cc++) = m(r, c);
      }
    }
    T term = m(0, j) * det_small(minor);
    acc = (j % 2 == 0) ? acc + term : acc - term;
  }
  return acc;
}

// Increasing index tuples of length k drawn from 0..n-1.
std::vector<std::vector<int>> multi_indices(int n, int k);

Form zero_form(int n, int k);
// Constant 2-form from a skew matrix: ω(u, v) = uᵀ m v.
Form constant_two_form(const Mat& m);
Form constant_covector(const Vec& xi);

// Σ_I c_I(x) dx^I over increasing multi-indices I.
Form component_form(int n, int k, std::vector<std::vector<int>> indices, std::vector<Expr> coeffs);

// Components keyed by 1-based digit strings, e.g. {"12": "x3"} for x3 dx1∧dx2.
Form form_from_strings(const Chart& chart, int k, const std::map<std::string, std::string>& comps);
SmoothMap field_from_strings(const Chart& chart, const std::vector<std::string>& comps);

Form ext_d(const Form& omega);
Form interior(const SmoothMap& x, const Form& omega);
Form lie_derivative(const SmoothMap& x, const Form& omega);
Form pullback(const SmoothMap& f, const Form& omega);
Form operator+(const Form& a, const Form& b);
Form operator-(const Form& a, const Form& b);
Form operator*(double c, const Form& a);
// Pairing of a 1-form with a vector field: the function x ↦ α(x; X(x)) as a 0-form.
Form pair(const Form& alpha, const SmoothMap& x);

SmoothMap lie_bracket(const SmoothMap& x, const SmoothMap& y);
SmoothMap constant_field(int n, const Vec& v);

Mat form_matrix(const Form& omega, const Vec& x);
Vec covector(const Form& alpha, const Vec& x);
double scalar_value(const Form& f, const Vec& x);
// All components ω(x; e_I) over increasing multi-indices.
Vec form_components(const Form& omega, const Vec& x);
// 1-form ω(x; a, b, ·) for a 3-form, returned as a covector.
Vec contract_two(const Form& phi, const Vec& x, const Vec& a, const Vec& b);

}  // namespace dirac
