#include "dirac/linear.hpp"

#include <Eigen/QR>

namespace dirac {

double pairing(const PairedVector& a, const PairedVector& b) {
  if (a.x.size() != b.x.size() || a.xi.size() != b.xi.size() || a.x.size() != a.xi.size())
    throw std::invalid_argument("pairing: dimension mismatch");
  return a.xi.dot(b.x) + b.xi.dot(a.x);
}

Mat pairing_matrix(int n) {
  Mat j = Mat::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = Mat::Identity(n, n);
  j.bottomLeftCorner(n, n) = Mat::Identity(n, n);
  return j;
}

LinearDirac LinearDirac::from_span(const Mat& span, double tol, double iso_tol) {
  if (span.rows() % 2 != 0) throw std::invalid_argument("span must have 2n rows");
  const int n = static_cast<int>(span.rows() / 2);
  LinearDirac l;
  l.n_ = n;
  l.tol_ = tol;
  if (n == 0) return l;

  const int r = numerical_rank(span, tol);
  if (r != n)
    throw NotDiracError("span has rank " + std::to_string(r) + ", expected " + std::to_string(n));
  Eigen::ColPivHouseholderQR<Mat> qr(span);
  Mat q = qr.householderQ() * Mat::Identity(span.rows(), n);
  l.basis_ = q;
  double defect = l.isotropy_defect();
  if (defect > iso_tol)
    throw NotDiracError("span is not isotropic (defect " + std::to_string(defect) + ")");
  l.canonical_ = rref(q.transpose(), tol).transpose();
  return l;
}

double LinearDirac::isotropy_defect() const {
  if (n_ == 0) return 0.0;
  Mat g = basis_.transpose() * pairing_matrix(n_) * basis_;
  return max_abs(g);
}

bool LinearDirac::contains(const PairedVector& v, double tol) const {
  Vec u(2 * n_);
  u << v.x, v.xi;
  Vec residual = u - basis_ * (basis_.transpose() * u);
  return residual.lpNorm<Eigen::Infinity>() <= tol * std::max(1.0, u.lpNorm<Eigen::Infinity>());
}

bool operator==(const LinearDirac& a, const LinearDirac& b) {
  if (a.n_ != b.n_) return false;
  if (a.n_ == 0) return true;
  return max_abs(a.canonical_ - b.canonical_) <= 1e-9;
}

double span_distance(const LinearDirac& a, const LinearDirac& b) {
  if (a.dim() != b.dim()) return 1.0;
  if (a.dim() == 0) return 0.0;
  return subspace_distance(a.basis(), b.basis());
}

namespace {
void require_skew(const Mat& m, const char* what) {
  if (m.rows() != m.cols()) throw std::invalid_argument(std::string(what) + " must be square");
  double scale = std::max(1.0, max_abs(m));
  if (max_abs(m + m.transpose()) > 1e-12 * scale)
    throw std::invalid_argument(std::string(what) + " is not skew-symmetric");
}
}  // namespace

LinearDirac from_form(const Mat& theta, double tol) {
  require_skew(theta, "form");
  const Eigen::Index n = theta.rows();
  Mat span(2 * n, n);
  span.topRows(n) = Mat::Identity(n, n);
  span.bottomRows(n) = theta.transpose();
  return LinearDirac::from_span(span, tol);
}

LinearDirac from_bivector(const Mat& pi, double tol) {
  require_skew(pi, "bivector");
  const Eigen::Index n = pi.rows();
  Mat span(2 * n, n);
  span.topRows(n) = pi;
  span.bottomRows(n) = Mat::Identity(n, n);
  return LinearDirac::from_span(span, tol);
}

InducedData induced(const LinearDirac& l) {
  const int n = l.dim();
  InducedData d;
  Mat x = l.x_block();
  Mat xi = l.xi_block();
  d.range = column_space(x, l.tol());
  d.kernel = null_space(xi.transpose(), l.tol());
  d.covectors = column_space(xi, l.tol());

  // For each range basis vector v_i pick any ξ_i with (v_i, ξ_i) ∈ L.
  auto solver = x.completeOrthogonalDecomposition();
  Mat coeff = solver.solve(d.range);
  Mat xis = xi * coeff;
  d.theta = xis.transpose() * d.range;
  d.theta_ambient = d.range * d.theta * d.range.transpose();

  auto solver2 = xi.completeOrthogonalDecomposition();
  Mat coeff2 = solver2.solve(d.covectors);
  Mat vs = x * coeff2;
  d.pi = d.covectors.transpose() * vs;
  d.pi_ambient = d.covectors * d.pi * d.covectors.transpose();
  (void)n;
  return d;
}

LinearDirac push_forward(const Mat& psi, const LinearDirac& l) {
  const int n = l.dim();
  if (psi.cols() != n) throw std::invalid_argument("push_forward: psi has wrong column count");
  const int m = static_cast<int>(psi.rows());
  Mat a = l.x_block();
  Mat alpha = l.xi_block();
  // (x, η) with ⟨(x, ψᵀη), (a_k, α_k)⟩ = α_k·x + η·ψa_k = 0 for all k.
  Mat c(n, n + m);
  c.leftCols(n) = alpha.transpose();
  c.rightCols(m) = (psi * a).transpose();
  Mat k = null_space(c, l.tol());
  Mat image(2 * m, k.cols());
  image.topRows(m) = psi * k.topRows(n);
  image.bottomRows(m) = k.bottomRows(m);
  RankInfo info = rank_info(image, l.tol());
  if (info.rank != m || info.indeterminate)
    throw DegeneratePushForward("push-forward has numerical rank " + std::to_string(info.rank) +
                                ", expected " + std::to_string(m));
  return LinearDirac::from_span(image, l.tol());
}

LinearDirac pull_back(const Mat& f, const LinearDirac& l) {
  const int m = l.dim();
  if (f.rows() != m) throw std::invalid_argument("pull_back: f has wrong row count");
  const int n = static_cast<int>(f.cols());
  Mat b = l.x_block();
  Mat beta = l.xi_block();
  // (X, ξ) with (fX, ξ) ∈ L: β_k·fX + ξ·b_k = 0 for all k.
  Mat c(m, n + m);
  c.leftCols(n) = beta.transpose() * f;
  c.rightCols(m) = b.transpose();
  Mat k = null_space(c, l.tol());
  Mat image(2 * n, k.cols());
  image.topRows(n) = k.topRows(n);
  image.bottomRows(n) = f.transpose() * k.bottomRows(m);
  RankInfo info = rank_info(image, l.tol());
  if (info.rank != n || info.indeterminate)
    throw NonSmoothPullBack("non-smooth pull-back point: candidate has dimension " +
                            std::to_string(info.rank) + ", expected " + std::to_string(n));
  return LinearDirac::from_span(image, l.tol());
}

bool is_dirac_map(const Mat& psi, const LinearDirac& lv, const LinearDirac& lw) {
  return push_forward(psi, lv) == lw;
}

LinearDirac gauge_transform(const LinearDirac& l, const Mat& b) {
  require_skew(b, "gauge form");
  const int n = l.dim();
  Mat span = l.basis();
  span.bottomRows(n) += b.transpose() * l.x_block();
  return LinearDirac::from_span(span, l.tol());
}

Vec lower(const Mat& metric, const Vec& v) { return metric * v; }
Vec raise(const Mat& metric, const Vec& xi) { return metric.fullPivLu().solve(xi); }

nlohmann::json to_json(const LinearDirac& l) {
  nlohmann::json j;
  j["dim"] = l.dim();
  j["tol"] = l.tol();
  std::vector<std::vector<double>> rows;
  const Mat& c = l.canonical();
  for (Eigen::Index r = 0; r < c.rows(); ++r) {
    std::vector<double> row;
    for (Eigen::Index k = 0; k < c.cols(); ++k) row.push_back(c(r, k));
    rows.push_back(row);
  }
  j["span"] = rows;
  return j;
}

LinearDirac linear_dirac_from_json(const nlohmann::json& j) {
  const int n = j.at("dim").get<int>();
  double tol = j.value("tol", kRankTol);
  const auto& rows = j.at("span");
  if (static_cast<int>(rows.size()) != 2 * n) throw std::invalid_argument("span must have 2n rows");
  const int cols = rows.empty() ? 0 : static_cast<int>(rows[0].size());
  Mat span(2 * n, cols);
  for (int r = 0; r < 2 * n; ++r)
    for (int c = 0; c < cols; ++c) span(r, c) = rows[r].at(c).get<double>();
  return LinearDirac::from_span(span, tol);
}

}  // namespace dirac
