#include "dirac/numerics.hpp"

#include <algorithm>
#include <cstdio>

#include <Eigen/SVD>

namespace dirac {

RankInfo rank_info(const Mat& a, double tol) {
  RankInfo info;
  if (a.size() == 0) return info;
  Eigen::JacobiSVD<Mat> svd(a);
  const Vec& s = svd.singularValues();
  info.sigma_max = s.size() ? s[0] : 0.0;
  info.threshold = std::max(tol * info.sigma_max, kAbsoluteZero);
  info.smallest_kept = 0.0;
  info.largest_dropped = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > info.threshold) {
      ++info.rank;
      info.smallest_kept = s[i];
    } else if (info.largest_dropped == 0.0) {
      info.largest_dropped = s[i];
    }
    if (s[i] > info.threshold / 10.0 && s[i] < info.threshold * 10.0 && s[i] > kAbsoluteZero)
      info.indeterminate = true;
  }
  return info;
}

int numerical_rank(const Mat& a, double tol) { return rank_info(a, tol).rank; }

Mat column_space(const Mat& a, double tol) {
  if (a.cols() == 0 || a.rows() == 0) return Mat(a.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullU);
  const Vec& s = svd.singularValues();
  double threshold = std::max(tol * (s.size() ? s[0] : 0.0), kAbsoluteZero);
  int r = 0;
  while (r < s.size() && s[r] > threshold) ++r;
  return svd.matrixU().leftCols(r);
}

Mat null_space(const Mat& a, double tol) {
  const Eigen::Index n = a.cols();
  if (n == 0) return Mat(0, 0);
  if (a.rows() == 0) return Mat::Identity(n, n);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  const Vec& s = svd.singularValues();
  double threshold = std::max(tol * (s.size() ? s[0] : 0.0), kAbsoluteZero);
  int r = 0;
  while (r < s.size() && s[r] > threshold) ++r;
  return svd.matrixV().rightCols(n - r);
}

Mat intersect(const Mat& u, const Mat& w, double tol) {
  if (u.cols() == 0 || w.cols() == 0) return Mat(u.rows(), 0);
  Mat qu = column_space(u, tol);
  Mat qw = column_space(w, tol);
  Mat stacked(qu.rows(), qu.cols() + qw.cols());
  stacked << qu, -qw;
  Mat k = null_space(stacked, tol);
  return column_space(qu * k.topRows(qu.cols()), tol);
}

Mat subspace_sum(const Mat& u, const Mat& w, double tol) {
  Mat stacked(u.rows(), u.cols() + w.cols());
  stacked << u, w;
  return column_space(stacked, tol);
}

double subspace_distance(const Mat& u, const Mat& w, double tol) {
  Mat qu = column_space(u, tol);
  Mat qw = column_space(w, tol);
  if (qu.cols() != qw.cols()) return 1.0;
  if (qu.cols() == 0) return 0.0;
  Mat residual = qu - qw * (qw.transpose() * qu);
  Eigen::JacobiSVD<Mat> svd(residual);
  return std::min(1.0, svd.singularValues()[0]);
}

bool contains(const Mat& big, const Mat& small, double tol) {
  if (small.cols() == 0) return true;
  Mat qb = column_space(big);
  Mat residual = small - qb * (qb.transpose() * small);
  double scale = std::max(1.0, max_abs(small));
  return max_abs(residual) <= tol * scale;
}

Mat rref(const Mat& input, double pivot_tol) {
  Mat a = input;
  Eigen::Index row = 0;
  for (Eigen::Index c = 0; c < a.cols() && row < a.rows(); ++c) {
    Eigen::Index piv = row;
    double best = std::abs(a(row, c));
    for (Eigen::Index r = row + 1; r < a.rows(); ++r) {
      if (std::abs(a(r, c)) > best) {
        best = std::abs(a(r, c));
        piv = r;
      }
    }
    if (best <= pivot_tol) {
      for (Eigen::Index r = row; r < a.rows(); ++r) a(r, c) = 0.0;
      continue;
    }
    a.row(row).swap(a.row(piv));
    a.row(row) /= a(row, c);
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      if (r != row) a.row(r) -= a(r, c) * a.row(row);
    }
    ++row;
  }
  return a;
}

Mat skew_part(const Mat& a) { return 0.5 * (a - a.transpose()); }

double max_abs(const Mat& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

double SampleRng::uniform(double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  return dist(engine_);
}

Vec SampleRng::uniform_vec(int n, double lo, double hi) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = uniform(lo, hi);
  return v;
}

Vec SampleRng::uniform_box(const Vec& lo, const Vec& hi) {
  Vec v(lo.size());
  for (Eigen::Index i = 0; i < lo.size(); ++i) v[i] = uniform(lo[i], hi[i]);
  return v;
}

Vec SampleRng::unit_vec(int n) {
  for (;;) {
    Vec v = uniform_vec(n, -1.0, 1.0);
    double norm = v.norm();
    if (norm > 0.1) return v / norm;
  }
}

Mat SampleRng::skew(int n, double scale) {
  Mat m = matrix(n, n, scale);
  return m - m.transpose();
}

Mat SampleRng::matrix(int rows, int cols, double scale) {
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = uniform(-scale, scale);
  return m;
}

std::vector<double> to_std(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

std::string format_point(const Vec& v) {
  std::string out = "(";
  char buf[48];
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s%.6g", i ? ", " : "", v[i]);
    out += buf;
  }
  return out + ")";
}

}  // namespace dirac
