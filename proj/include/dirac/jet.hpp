#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <type_traits>

#include <Eigen/Core>

namespace dirac {

inline constexpr int kJetCapacity = 3;

// Value plus up to kJetCapacity directional partials. Partials past the active
// width are kept at zero so binary operations can mix widths freely.
template <class T>
struct Jet {
  T v{};
  std::array<T, kJetCapacity> d{};
  int w = 0;

  Jet() = default;
  Jet(const T& value) : v(value) {}
  template <class S,
            class = std::enable_if_t<std::is_arithmetic_v<S> && !std::is_same_v<S, T>>>
  Jet(S value) : v(static_cast<double>(value)) {}

  static Jet variable(const T& value, int slot, int width) {
    Jet r(value);
    r.w = width;
    r.d[slot] = T(1.0);
    return r;
  }

  int width() const { return w; }
  const T& partial(int k) const { return d[k]; }

  friend Jet operator+(const Jet& a, const Jet& b) {
    Jet r(a.v + b.v);
    r.w = std::max(a.w, b.w);
    for (int i = 0; i < r.w; ++i) r.d[i] = a.d[i] + b.d[i];
    return r;
  }
  friend Jet operator-(const Jet& a, const Jet& b) {
    Jet r(a.v - b.v);
    r.w = std::max(a.w, b.w);
    for (int i = 0; i < r.w; ++i) r.d[i] = a.d[i] - b.d[i];
    return r;
  }
  friend Jet operator-(const Jet& a) {
    Jet r(-a.v);
    r.w = a.w;
    for (int i = 0; i < r.w; ++i) r.d[i] = -a.d[i];
    return r;
  }
  friend Jet operator+(const Jet& a) { return a; }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r(a.v * b.v);
    r.w = std::max(a.w, b.w);
    for (int i = 0; i < r.w; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
    return r;
  }
  friend Jet operator/(const Jet& a, const Jet& b) {
    Jet r(a.v / b.v);
    r.w = std::max(a.w, b.w);
    for (int i = 0; i < r.w; ++i) r.d[i] = (a.d[i] - r.v * b.d[i]) / b.v;
    return r;
  }

  Jet& operator+=(const Jet& o) { return *this = *this + o; }
  Jet& operator-=(const Jet& o) { return *this = *this - o; }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }
  Jet& operator/=(const Jet& o) { return *this = *this / o; }

  friend bool operator<(const Jet& a, const Jet& b) { return a.v < b.v; }
  friend bool operator>(const Jet& a, const Jet& b) { return a.v > b.v; }
  friend bool operator<=(const Jet& a, const Jet& b) { return a.v <= b.v; }
  friend bool operator>=(const Jet& a, const Jet& b) { return a.v >= b.v; }
  friend bool operator==(const Jet& a, const Jet& b) { return a.v == b.v; }
  friend bool operator!=(const Jet& a, const Jet& b) { return a.v != b.v; }
};

using J1 = Jet<double>;
using J2 = Jet<J1>;
using J3 = Jet<J2>;

template <class T>
struct jet_depth : std::integral_constant<int, 0> {};
template <class T>
struct jet_depth<Jet<T>> : std::integral_constant<int, 1 + jet_depth<T>::value> {};

inline constexpr int kMaxJetDepth = 3;
template <class T>
inline constexpr bool kLiftable = jet_depth<T>::value < kMaxJetDepth;

inline double value_of(double x) { return x; }
template <class T>
double value_of(const Jet<T>& x) {
  return value_of(x.v);
}

namespace detail {
template <class T>
Jet<T> chain(const Jet<T>& a, const T& fv, const T& dfv) {
  Jet<T> r(fv);
  r.w = a.w;
  for (int i = 0; i < r.w; ++i) r.d[i] = dfv * a.d[i];
  return r;
}
}  // namespace detail

template <class T>
Jet<T> sin(const Jet<T>& a) {
  using std::cos;
  using std::sin;
  return detail::chain(a, T(sin(a.v)), T(cos(a.v)));
}

template <class T>
Jet<T> cos(const Jet<T>& a) {
  using std::cos;
  using std::sin;
  return detail::chain(a, T(cos(a.v)), T(-sin(a.v)));
}

template <class T>
Jet<T> exp(const Jet<T>& a) {
  using std::exp;
  T e = exp(a.v);
  return detail::chain(a, e, e);
}

template <class T>
Jet<T> sqrt(const Jet<T>& a) {
  using std::sqrt;
  T s = sqrt(a.v);
  return detail::chain(a, s, T(0.5) / s);
}

template <class T>
Jet<T> atan2(const Jet<T>& y, const Jet<T>& x) {
  using std::atan2;
  Jet<T> r(T(atan2(y.v, x.v)));
  r.w = std::max(x.w, y.w);
  T den = x.v * x.v + y.v * y.v;
  for (int i = 0; i < r.w; ++i) r.d[i] = (x.v * y.d[i] - y.v * x.d[i]) / den;
  return r;
}

template <class T>
Jet<T> abs(const Jet<T>& a) {
  return value_of(a) < 0.0 ? -a : a;
}

template <class T>
Jet<T> abs2(const Jet<T>& a) {
  return a * a;
}

template <class T>
bool isfinite(const Jet<T>& a) {
  using std::isfinite;
  if (!isfinite(a.v)) return false;
  for (int i = 0; i < a.w; ++i)
    if (!isfinite(a.d[i])) return false;
  return true;
}

}  // namespace dirac

namespace Eigen {

template <class T>
struct NumTraits<dirac::Jet<T>> : GenericNumTraits<dirac::Jet<T>> {
  using Real = dirac::Jet<T>;
  using NonInteger = dirac::Jet<T>;
  using Nested = dirac::Jet<T>;
  using Literal = dirac::Jet<T>;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 2 * (dirac::kJetCapacity + 1),
    MulCost = 4 * (dirac::kJetCapacity + 1)
  };
  static inline Real epsilon() { return Real(std::numeric_limits<double>::epsilon()); }
  static inline Real dummy_precision() { return Real(1e-12); }
  static inline Real highest() { return Real(std::numeric_limits<double>::max()); }
  static inline Real lowest() { return Real(std::numeric_limits<double>::lowest()); }
  static inline int digits10() { return std::numeric_limits<double>::digits10; }
};

}  // namespace Eigen
