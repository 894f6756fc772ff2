#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dirac/expr.hpp"
#include "dirac/types.hpp"

namespace dirac {

class DepthError : public std::runtime_error {
 public:
  DepthError() : std::runtime_error("jet nesting depth exceeded") {}
};

[[noreturn]] inline void throw_depth() { throw DepthError(); }

// Type-erased smooth map R^in → R^out, evaluable on doubles and nested jets.
class SmoothMap {
 public:
  struct Impl {
    virtual ~Impl() = default;
    virtual Vec eval(const Vec& x) const = 0;
    virtual VecX<J1> eval(const VecX<J1>& x) const = 0;
    virtual VecX<J2> eval(const VecX<J2>& x) const = 0;
    virtual VecX<J3> eval(const VecX<J3>& x) const = 0;
  };

  SmoothMap() = default;
  SmoothMap(int in, int out, std::shared_ptr<const Impl> impl)
      : in_(in), out_(out), impl_(std::move(impl)) {}

  int in_dim() const { return in_; }
  int out_dim() const { return out_; }
  bool valid() const { return impl_ != nullptr; }

  template <class T>
  VecX<T> operator()(const VecX<T>& x) const {
    if (!impl_) throw std::logic_error("evaluating an empty map");
    if (x.size() != in_)
      throw std::invalid_argument("map expects " + std::to_string(in_) + " inputs, got " +
                                  std::to_string(x.size()));
    return impl_->eval(x);
  }

 private:
  int in_ = 0;
  int out_ = 0;
  std::shared_ptr<const Impl> impl_;
};

template <class F>
class LambdaMap final : public SmoothMap::Impl {
 public:
  explicit LambdaMap(F f) : f_(std::move(f)) {}
  Vec eval(const Vec& x) const override { return f_(x); }
  VecX<J1> eval(const VecX<J1>& x) const override { return f_(x); }
  VecX<J2> eval(const VecX<J2>& x) const override { return f_(x); }
  VecX<J3> eval(const VecX<J3>& x) const override { return f_(x); }

 private:
  F f_;
};

template <class F>
SmoothMap make_map(int in, int out, F f) {
  return SmoothMap(in, out, std::make_shared<const LambdaMap<F>>(std::move(f)));
}

template <class T>
VecX<T> cast_vec(const Vec& v) {
  return v.template cast<T>();
}

template <class T>
MatX<T> cast_mat(const Mat& m) {
  return m.template cast<T>();
}

// Seeds x as a jet with one partial slot per direction.
template <class T>
VecX<Jet<T>> seed(const VecX<T>& x, std::span<const VecX<T>> dirs) {
  const int width = static_cast<int>(dirs.size());
  VecX<Jet<T>> out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    out[i] = Jet<T>(x[i]);
    out[i].w = width;
    for (int k = 0; k < width; ++k) out[i].d[k] = dirs[k][i];
  }
  return out;
}

template <class T>
VecX<Jet<T>> seed(const VecX<T>& x, const VecX<T>& dir) {
  return seed<T>(x, std::span<const VecX<T>>(&dir, 1));
}

template <class T>
VecX<Jet<T>> lift(const VecX<T>& x) {
  VecX<Jet<T>> out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = Jet<T>(x[i]);
  return out;
}

template <class T>
VecX<T> values(const VecX<Jet<T>>& y) {
  VecX<T> out(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) out[i] = y[i].v;
  return out;
}

template <class T>
VecX<T> partials(const VecX<Jet<T>>& y, int k) {
  VecX<T> out(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) out[i] = y[i].d[k];
  return out;
}

// Df(x)·v.
template <class T>
VecX<T> directional(const SmoothMap& f, const VecX<T>& x, const VecX<T>& v) {
  if constexpr (!kLiftable<T>) {
    throw_depth();
  } else {
    return partials(f(seed<T>(x, v)), 0);
  }
}

// f(x) together with Df(x)·v_k for every k.
template <class T>
VecX<T> push_vectors(const SmoothMap& f, const VecX<T>& x, std::span<const VecX<T>> vs,
                     std::vector<VecX<T>>& out) {
  out.clear();
  if (vs.empty()) return f(x);
  if constexpr (!kLiftable<T>) {
    throw_depth();
  } else {
    VecX<T> value;
    for (std::size_t start = 0; start < vs.size(); start += kJetCapacity) {
      std::size_t count = std::min<std::size_t>(kJetCapacity, vs.size() - start);
      auto y = f(seed<T>(x, vs.subspan(start, count)));
      if (start == 0) value = values(y);
      for (std::size_t k = 0; k < count; ++k) out.push_back(partials(y, static_cast<int>(k)));
    }
    return value;
  }
}

template <class T>
MatX<T> jacobian(const SmoothMap& f, const VecX<T>& x) {
  const int n = f.in_dim();
  std::vector<VecX<T>> basis;
  for (int j = 0; j < n; ++j) {
    VecX<T> e = VecX<T>::Zero(n);
    e[j] = T(1.0);
    basis.push_back(e);
  }
  std::vector<VecX<T>> cols;
  push_vectors<T>(f, x, std::span<const VecX<T>>(basis), cols);
  MatX<T> jac(f.out_dim(), n);
  for (int j = 0; j < n; ++j) jac.col(j) = cols[j];
  return jac;
}

SmoothMap compose(const SmoothMap& f, const SmoothMap& g);
SmoothMap affine_map(const Mat& a, const Vec& b);
SmoothMap linear_map(const Mat& a);
SmoothMap identity_map(int n);
SmoothMap coordinate_slice(int in, int start, int len);
SmoothMap constant_map(int in, const Vec& value);
SmoothMap concat(const SmoothMap& f, const SmoothMap& g);
SmoothMap sum_maps(const SmoothMap& f, const SmoothMap& g, double a = 1.0, double b = 1.0);
SmoothMap expr_map(const std::vector<Expr>& exprs, int in);
SmoothMap expr_map(const std::vector<std::string>& sources, const std::vector<std::string>& vars);

}  // namespace dirac
