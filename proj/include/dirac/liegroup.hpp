#pragma once

#include <string>
#include <vector>

#include "dirac/groupoid.hpp"

namespace dirac {

class ChartRadiusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Series-evaluated exponential charts refuse points beyond this radius; the closed-form
// abelian charts only stay inside the principal branch of the logarithm.
inline constexpr double kChartRefuse = 1.0;
inline constexpr double kAbelianChartRefuse = 3.0;
inline constexpr int kSeriesTerms = 16;

enum class GroupKind { SO3, SU2, U1, Torus2 };

class MatrixGroup {
 public:
  static MatrixGroup so3();
  static MatrixGroup su2();
  static MatrixGroup u1();
  static MatrixGroup torus2();
  static MatrixGroup by_name(const std::string& name);
  static std::vector<std::string> names();

  const std::string& name() const { return name_; }
  GroupKind kind() const { return kind_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  int size() const { return size_; }
  bool abelian() const { return kind_ == GroupKind::U1 || kind_ == GroupKind::Torus2; }
  double chart_radius() const { return abelian() ? kAbelianChartRefuse : kChartRefuse; }
  const std::vector<Mat>& basis() const { return basis_; }
  const Mat& metric() const { return metric_; }
  // structure()[k](i, j) = c^k_ij with [e_i, e_j] = Σ_k c^k_ij e_k.
  const std::vector<Mat>& structure() const { return structure_; }

  template <class T>
  MatX<T> hat(const VecX<T>& u) const {
    MatX<T> m = MatX<T>::Zero(size_, size_);
    for (int i = 0; i < dim(); ++i) m += u[i] * cast_mat<T>(basis_[i]);
    return m;
  }

  template <class T>
  VecX<T> vee(const MatX<T>& m) const {
    VecX<T> b(dim());
    for (int i = 0; i < dim(); ++i) b[i] = cast_mat<T>(basis_[i]).cwiseProduct(m).sum();
    return cast_mat<T>(gram_inv_) * b;
  }

  template <class T>
  VecX<T> bracket(const VecX<T>& u, const VecX<T>& v) const {
    VecX<T> out(dim());
    for (int k = 0; k < dim(); ++k) out[k] = u.dot(cast_mat<T>(structure_[k]) * v);
    return out;
  }

  template <class T>
  T inner(const VecX<T>& u, const VecX<T>& v) const {
    return u.dot(cast_mat<T>(metric_) * v);
  }

  template <class T>
  MatX<T> exp(const VecX<T>& u) const;

  template <class T>
  VecX<T> log(const MatX<T>& g) const;

  // Ad_g as a d×d matrix in basis coordinates.
  template <class T>
  MatX<T> ad_matrix(const MatX<T>& g) const {
    MatX<T> out(dim(), dim());
    MatX<T> gt = g.transpose();
    for (int j = 0; j < dim(); ++j) out.col(j) = vee<T>(MatX<T>(g * cast_mat<T>(basis_[j]) * gt));
    return out;
  }

  // Chart coordinates of exp(u1) exp(u2).
  template <class T>
  VecX<T> product(const VecX<T>& u1, const VecX<T>& u2) const {
    return log<T>(MatX<T>(exp<T>(u1) * exp<T>(u2)));
  }

  // Left (g⁻¹dg) and right (dg g⁻¹) Maurer-Cartan forms in the chart, as d×d matrices.
  template <class T>
  MatX<T> lambda(const VecX<T>& u) const {
    return maurer_cartan<T>(u, true);
  }
  template <class T>
  MatX<T> lambda_bar(const VecX<T>& u) const {
    return maurer_cartan<T>(u, false);
  }

 private:
  template <class T>
  MatX<T> maurer_cartan(const VecX<T>& u, bool left) const;

  std::string name_;
  GroupKind kind_ = GroupKind::SO3;
  int size_ = 0;
  std::vector<Mat> basis_;
  Mat gram_inv_;
  Mat metric_;
  std::vector<Mat> structure_;

  void finish();
  friend MatrixGroup make_group(std::string, GroupKind, std::vector<Mat>);
};

namespace detail {

inline double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// Σ_k (−s)^k / (2k + offset)!
template <class T>
T trig_series(const T& s, int offset) {
  T acc(0.0);
  T power(1.0);
  for (int k = 0; k < kSeriesTerms; ++k) {
    acc = acc + power * T(1.0 / factorial(2 * k + offset));
    power = power * (-s);
  }
  return acc;
}

// asin(r)/r as a series in r².
template <class T>
T asin_ratio_series(const T& s) {
  T acc(0.0);
  T power(1.0);
  double c = 1.0;
  for (int k = 0; k < 2 * kSeriesTerms; ++k) {
    acc = acc + power * T(c / (2 * k + 1));
    c *= (2.0 * k + 1.0) / (2.0 * k + 2.0);
    power = power * s;
  }
  return acc;
}

}  // namespace detail

template <class T>
MatX<T> MatrixGroup::exp(const VecX<T>& u) const {
  using std::cos;
  using std::sin;
  T s = u.dot(u);
  if (value_of(s) > chart_radius() * chart_radius())
    throw ChartRadiusError(name_ + ": chart point outside the admissible radius");
  MatX<T> id = MatX<T>::Identity(size_, size_);
  MatX<T> k = hat<T>(u);
  switch (kind_) {
    case GroupKind::SO3:
      return id + detail::trig_series(s, 1) * k + detail::trig_series(s, 2) * (k * k);
    case GroupKind::SU2:
      return detail::trig_series(s, 0) * id + detail::trig_series(s, 1) * k;
    case GroupKind::U1:
    case GroupKind::Torus2: {
      MatX<T> g = MatX<T>::Zero(size_, size_);
      for (int b = 0; b < dim(); ++b) {
        T c = cos(u[b]), sn = sin(u[b]);
        g(2 * b, 2 * b) = c;
        g(2 * b, 2 * b + 1) = -sn;
        g(2 * b + 1, 2 * b) = sn;
        g(2 * b + 1, 2 * b + 1) = c;
      }
      return g;
    }
  }
  return id;
}

template <class T>
VecX<T> MatrixGroup::log(const MatX<T>& g) const {
  using std::atan2;
  using std::sqrt;
  if (abelian()) {
    VecX<T> u(dim());
    for (int b = 0; b < dim(); ++b) u[b] = atan2(g(2 * b + 1, 2 * b), g(2 * b, 2 * b));
    return u;
  }
  T tr = g.trace();
  T w = kind_ == GroupKind::SO3 ? (tr - T(1.0)) * T(0.5) : tr * T(1.0 / size_);
  VecX<T> v = vee<T>(MatX<T>((g - g.transpose()) * T(0.5)));
  T s2 = v.dot(v);
  T ratio;
  if (value_of(s2) < 0.09 && value_of(w) > 0.0) {
    ratio = detail::asin_ratio_series(s2);
  } else {
    T r = sqrt(s2);
    ratio = atan2(r, w) / r;
  }
  VecX<T> u = ratio * v;
  if (value_of(u.dot(u)) > chart_radius() * chart_radius())
    throw ChartRadiusError(name_ + ": logarithm outside the admissible radius");
  return u;
}

template <class T>
MatX<T> MatrixGroup::maurer_cartan(const VecX<T>& u, bool left) const {
  if constexpr (!kLiftable<T>) {
    throw_depth();
  } else {
    const int d = dim();
    MatX<T> out(d, d);
    MatX<T> g = exp<T>(u);
    MatX<T> gt = g.transpose();
    for (int start = 0; start < d; start += kJetCapacity) {
      const int count = std::min(kJetCapacity, d - start);
      std::vector<VecX<T>> dirs;
      for (int j = 0; j < count; ++j) {
        VecX<T> e = VecX<T>::Zero(d);
        e[start + j] = T(1.0);
        dirs.push_back(e);
      }
      MatX<Jet<T>> gj = exp<Jet<T>>(seed<T>(u, std::span<const VecX<T>>(dirs)));
      for (int j = 0; j < count; ++j) {
        MatX<T> dg(size_, size_);
        for (int r = 0; r < size_; ++r)
          for (int c = 0; c < size_; ++c) dg(r, c) = gj(r, c).d[j];
        out.col(start + j) = vee<T>(MatX<T>(left ? MatX<T>(gt * dg) : MatX<T>(dg * gt)));
      }
    }
    return out;
  }
}

// Bi-invariant Cartan 3-form ½(λU, [λV, λW]) on the exponential chart at e.
Form cartan_form(const MatrixGroup& h);

// Cartan-Dirac structure at the group element g in left trivialization, 𝔥 ≅ 𝔥* through
// the metric: span of (Ad_{g⁻¹}v − v, ½ G (v + Ad_{g⁻¹}v)).
LinearDirac cartan_dirac(const MatrixGroup& h, const Mat& g, double tol = kRankTol);
// The same structure in exponential chart coordinates at exp(u).
LinearDirac cartan_dirac_chart(const MatrixGroup& h, const Vec& u, double tol = kRankTol);
// Frame sections (v_r − v_l, ½(v_r + v_l)♭) for the basis, in chart coordinates.
AlmostDiracField cartan_dirac_field(const MatrixGroup& h);
// ½(λ + λ̄)ᵀ G e_i as 1-forms on the chart.
std::vector<Form> cartan_rho_star(const MatrixGroup& h);

// Group H acting on a chart M with Cartan-model data (ρ*, φ).
struct CartanTriple {
  MatrixGroup group;
  int m = 0;
  SmoothMap action;            // R^{d+m} → R^m: (u_g, x) ↦ g·x
  std::vector<Form> rho_star;  // ρ*(e_i), 1-forms on M
  Form phi;                    // closed 3-form on M; invalid means zero
  BoxSampler points;           // base points of M
  double group_box = 0.15;     // chart coordinates of sampled group elements lie in [−b, b]
};

// Infinitesimal generator ρ(e_i) = d/dε exp(ε e_i)·x.
SmoothMap generator(const CartanTriple& tr, int i);

// H⋉M with s(g,x) = x, t(g,x) = g·x, algebroid basis (e_i, 0) at units.
ChartGroupoid action_groupoid(const CartanTriple& tr);

// ⟨ρ*(λV), ρ(λV′)⟩ + ⟨ρ*(λV), X′⟩ − ⟨ρ*(λV′), X⟩.
Form general_action_form(const CartanTriple& tr);

CartanTriple conjugation_triple(const MatrixGroup& h);
CartanTriple coadjoint_triple(const MatrixGroup& h);

// Explicit AMM 2-form ½[(Ad_x λV, λV′) − (Ad_x λV′, λV) + (λV, (λ+λ̄)X′) − (λV′, (λ+λ̄)X)].
Form amm_form(const MatrixGroup& h);
std::pair<ChartGroupoid, GroupoidForm> amm_groupoid(const MatrixGroup& h);
std::pair<ChartGroupoid, GroupoidForm> coadjoint_groupoid(const MatrixGroup& h);
// Liouville form ξ(λV) on H × 𝔥*.
Form liouville_form(const MatrixGroup& h);

}  // namespace dirac
