#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dirac/types.hpp"

namespace dirac {

inline constexpr double kRankTol = 1e-9;
inline constexpr double kAbsoluteZero = 1e-14;

// Outcome of a singular-value rank decision. A value within a factor of 10 of
// the threshold on either side makes the decision indeterminate.
struct RankInfo {
  int rank = 0;
  double sigma_max = 0.0;
  double threshold = 0.0;
  double smallest_kept = 0.0;
  double largest_dropped = 0.0;
  bool indeterminate = false;
};

RankInfo rank_info(const Mat& a, double tol = kRankTol);
int numerical_rank(const Mat& a, double tol = kRankTol);

// Orthonormal bases.
Mat column_space(const Mat& a, double tol = kRankTol);
Mat null_space(const Mat& a, double tol = kRankTol);
Mat intersect(const Mat& u, const Mat& w, double tol = kRankTol);
Mat subspace_sum(const Mat& u, const Mat& w, double tol = kRankTol);

// Sine of the largest principal angle; 1 when dimensions differ.
double subspace_distance(const Mat& u, const Mat& w, double tol = kRankTol);
bool contains(const Mat& big, const Mat& small, double tol = 1e-8);

Mat rref(const Mat& a, double pivot_tol = kRankTol);

Mat skew_part(const Mat& a);
double max_abs(const Mat& a);

// Small dense solve with partial pivoting on values; works on jet scalars.
template <class T>
VecX<T> solve_small(MatX<T> a, VecX<T> b) {
  const Eigen::Index n = a.rows();
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index piv = c;
    double best = std::abs(value_of(a(c, c)));
    for (Eigen::Index r = c + 1; r < n; ++r) {
      double v = std::abs(value_of(a(r, c)));
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == 0.0) throw std::runtime_error("singular matrix in solve_small");
    if (piv != c) {
      a.row(c).swap(a.row(piv));
      std::swap(b[c], b[piv]);
    }
    for (Eigen::Index r = c + 1; r < n; ++r) {
      T f = a(r, c) / a(c, c);
      for (Eigen::Index k = c; k < n; ++k) a(r, k) = a(r, k) - f * a(c, k);
      b[r] = b[r] - f * b[c];
    }
  }
  VecX<T> x(n);
  for (Eigen::Index r = n - 1; r >= 0; --r) {
    T acc = b[r];
    for (Eigen::Index k = r + 1; k < n; ++k) acc = acc - a(r, k) * x[k];
    x[r] = acc / a(r, r);
  }
  return x;
}

class SampleRng {
 public:
  explicit SampleRng(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi);
  Vec uniform_vec(int n, double lo, double hi);
  Vec uniform_box(const Vec& lo, const Vec& hi);
  Vec unit_vec(int n);
  Mat skew(int n, double scale = 1.0);
  Mat matrix(int rows, int cols, double scale = 1.0);
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

std::vector<double> to_std(const Vec& v);
std::string format_point(const Vec& v);

}  // namespace dirac
