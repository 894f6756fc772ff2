#include "support.hpp"

#include "dirac/liegroup.hpp"

using namespace dirac;
using test::vec;

namespace {

const std::vector<std::string> kGroups = {"so3", "su2", "u1", "torus2"};

Mat fd_exp_left(const MatrixGroup& h, const Vec& u, double e = 1e-6) {
  Mat out(h.dim(), h.dim());
  Mat ginv = h.exp<double>(u).transpose();
  for (int j = 0; j < h.dim(); ++j) {
    Vec d = Vec::Unit(h.dim(), j) * e;
    Mat dg = (h.exp<double>(Vec(u + d)) - h.exp<double>(Vec(u - d))) / (2 * e);
    out.col(j) = h.vee<double>(Mat(ginv * dg));
  }
  return out;
}

}  // namespace

TEST_SUITE("liegroup") {
  TEST_CASE("metric is ad-invariant") {
    for (const auto& name : kGroups) {
      MatrixGroup h = MatrixGroup::by_name(name);
      for (int i = 0; i < h.dim(); ++i)
        for (int j = 0; j < h.dim(); ++j)
          for (int k = 0; k < h.dim(); ++k) {
            Vec u = Vec::Unit(h.dim(), i), v = Vec::Unit(h.dim(), j), w = Vec::Unit(h.dim(), k);
            CHECK(std::abs(h.inner<double>(h.bracket<double>(u, v), w) + h.inner<double>(v, h.bracket<double>(u, w))) <=
                  1e-12);
          }
    }
  }

  TEST_CASE("exponential chart at the origin") {
    for (const auto& name : kGroups) {
      MatrixGroup h = MatrixGroup::by_name(name);
      Vec zero = Vec::Zero(h.dim());
      CHECK(max_abs(h.exp<double>(zero) - Mat::Identity(h.size(), h.size())) == 0.0);
      CHECK(max_abs(h.lambda<double>(zero) - Mat::Identity(h.dim(), h.dim())) <= 1e-12);
    }
  }

  TEST_CASE("log inverts exp and the Maurer-Cartan form matches finite differences") {
    for (const auto& name : kGroups) {
      MatrixGroup h = MatrixGroup::by_name(name);
      for (const Vec& u : test::points(h.dim(), 6, 1, 0.5)) {
        CHECK((h.log<double>(h.exp<double>(u)) - u).norm() <= 1e-12);
        CHECK(max_abs(h.lambda<double>(u) - fd_exp_left(h, u)) <= 1e-8);
      }
    }
  }

  TEST_CASE("Maurer-Cartan structure equations") {
    for (const auto& name : {"so3", "su2"}) {
      MatrixGroup h = MatrixGroup::by_name(name);
      const double e = 1e-5;
      for (const Vec& u : test::points(3, 6, 2, 0.5)) {
        for (bool left : {true, false}) {
          auto lam = [&](const Vec& p) { return left ? h.lambda<double>(p) : h.lambda_bar<double>(p); };
          Mat at = lam(u);
          for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) {
              Vec di = Vec::Unit(3, i) * e, dj = Vec::Unit(3, j) * e;
              Vec dlj = (lam(Vec(u + di)).col(j) - lam(Vec(u - di)).col(j)) / (2 * e);
              Vec dli = (lam(Vec(u + dj)).col(i) - lam(Vec(u - dj)).col(i)) / (2 * e);
              Vec br = h.bracket<double>(Vec(at.col(i)), Vec(at.col(j)));
              // dλ + ½[λ, λ] = 0 and dλ̄ − ½[λ̄, λ̄] = 0.
              CHECK((dlj - dli + (left ? 1.0 : -1.0) * br).norm() <= 1e-8);
            }
        }
      }
    }
  }

  TEST_CASE("adjoint action is orthogonal") {
    for (const auto& name : kGroups) {
      MatrixGroup h = MatrixGroup::by_name(name);
      SampleRng rng(3);
      for (int c = 0; c < 10; ++c) {
        Mat ad = h.ad_matrix<double>(h.exp<double>(rng.uniform_vec(h.dim(), -0.5, 0.5)));
        Vec u = rng.uniform_vec(h.dim(), -1, 1), v = rng.uniform_vec(h.dim(), -1, 1);
        CHECK(std::abs(h.inner<double>(Vec(ad * u), Vec(ad * v)) - h.inner<double>(u, v)) <= 1e-10);
      }
    }
  }

  TEST_CASE("Cartan three-form") {
    MatrixGroup so3 = MatrixGroup::so3();
    Vec e1 = Vec::Unit(3, 0), e2 = Vec::Unit(3, 1), e3 = Vec::Unit(3, 2);
    REQUIRE((so3.bracket<double>(e2, e3) - e1).norm() <= 1e-15);
    REQUIRE(max_abs(so3.metric() - Mat::Identity(3, 3)) <= 1e-15);
    CHECK(cartan_form(so3).at(Vec::Zero(3), {e1, e2, e3}) == doctest::Approx(0.5));
    MatrixGroup t2 = MatrixGroup::torus2();
    Form t2phi = cartan_form(t2);
    CHECK(t2phi.degree() == 3);
    for (const Vec& u : test::points(2, 4, 4)) CHECK(t2phi.at(u, {Vec::Unit(2, 0), Vec::Unit(2, 1), Vec(u)}) == 0.0);
    for (const auto& name : {"so3", "su2"})
      CHECK(closedness_residual(cartan_form(MatrixGroup::by_name(name)), test::points(3, 8, 5, 0.5)) <= 1e-10);
  }

  TEST_CASE("Cartan-Dirac structure") {
    for (const auto& name : kGroups) {
      MatrixGroup h = MatrixGroup::by_name(name);
      int d = h.dim();
      CHECK(cartan_dirac(h, Mat::Identity(h.size(), h.size())) == from_bivector(Mat::Zero(d, d)));
      CHECK(integrability_residual(cartan_dirac_field(h), cartan_form(h), test::points(d, 8, 6, 0.5)).value <= 1e-8);
    }
  }

  TEST_CASE("SU(2) at diag(i, -i)") {
    MatrixGroup su2 = MatrixGroup::su2();
    // Left multiplication by the quaternion i is diag(i, −i) in the real 4×4 embedding.
    Mat g0 = su2.basis()[0];
    REQUIRE(max_abs(Mat(g0 * g0) + Mat::Identity(4, 4)) <= 1e-15);
    Mat ad = su2.ad_matrix<double>(g0);
    Eigen::SelfAdjointEigenSolver<Mat> es(Mat(0.5 * (ad + ad.transpose())));
    int minus_one = 0;
    for (int i = 0; i < 3; ++i) minus_one += std::abs(es.eigenvalues()[i] + 1) < 1e-9;
    CHECK(minus_one == 2);
    CHECK(induced(cartan_dirac(su2, g0)).kernel.cols() == 2);
  }

  TEST_CASE("AMM groupoid") {
    for (const auto& name : {"so3", "su2"}) {
      MatrixGroup h = MatrixGroup::by_name(name);
      auto [g, f] = amm_groupoid(h);
      SamplePolicy pol;
      pol.samples = 16;
      ClassificationReport rep = classify(g, f, pol);
      CHECK(rep.residuals.at("multiplicative").value <= 1e-9);
      CHECK(rep.residuals.at("rel_closed").value <= 1e-8);
      CHECK(rep.residuals.at("unit_pullback").value <= 1e-9);
      CHECK(rep.residuals.at("inverse_pullback").value <= 1e-9);
      CHECK(rep.flags.at("is_presymplectic"));
      CHECK(rep.flags.at("is_nondegenerate"));
      auto rs = cartan_rho_star(h);
      for (const Vec& u : test::points(3, 6, 7, 0.5)) {
        Mat want(3, 3);
        for (int i = 0; i < 3; ++i) want.col(i) = covector(rs[i], u);
        CHECK(max_abs(Mat(extract_rho_star(g, f, u).rho_star - want)) <= 1e-9);
        CHECK(span_distance(induced_dirac(g, f, u), cartan_dirac_chart(h, u)) <= 1e-8);
      }
    }
  }

  TEST_CASE("rho star is half the sum of the Maurer-Cartan forms") {
    MatrixGroup h = MatrixGroup::so3();
    auto rs = cartan_rho_star(h);
    for (const Vec& u : test::points(3, 4, 8, 0.5)) {
      Mat lam = h.lambda<double>(u), lamb = h.lambda_bar<double>(u);
      for (int i = 0; i < 3; ++i) {
        Vec v = Vec::Unit(3, i);
        Vec want = 0.5 * (lam + lamb).transpose() * h.metric() * v;
        CHECK((covector(rs[i], u) - want).norm() <= 1e-12);
      }
    }
  }

  TEST_CASE("torus AMM groupoid") {
    MatrixGroup h = MatrixGroup::torus2();
    auto [g, f] = amm_groupoid(h);
    SamplePolicy pol;
    pol.samples = 16;
    ClassificationReport rep = classify(g, f, pol);
    CHECK(rep.residuals.at("multiplicative").value <= 1e-9);
    CHECK(rep.residuals.at("rel_closed").value <= 1e-9);
    CHECK(rep.flags.at("is_presymplectic"));
    for (const Vec& u : test::points(2, 4, 9))
      CHECK(span_distance(induced_dirac(g, f, u), from_bivector(Mat::Zero(2, 2))) <= 1e-9);
  }

  TEST_CASE("general action form reproduces the AMM and coadjoint forms") {
    for (const auto& name : {"so3", "su2"}) {
      MatrixGroup h = MatrixGroup::by_name(name);
      Form general = general_action_form(conjugation_triple(h));
      Form amm = amm_form(h);
      Form coadj = coadjoint_groupoid(h).second.omega;
      Form coadj_general = general_action_form(coadjoint_triple(h));
      SampleRng rng(10);
      for (int c = 0; c < 6; ++c) {
        Vec p(6);
        p << rng.uniform_vec(3, -0.3, 0.3), rng.uniform_vec(3, -0.3, 0.3);
        CHECK(max_abs(form_matrix(general, p) - form_matrix(amm, p)) <= 1e-10);
        CHECK(max_abs(form_matrix(coadj_general, p) - form_matrix(coadj, p)) <= 1e-10);
        // Canonical symplectic form of T*H in the trivialization.
        CHECK(max_abs(form_matrix(coadj, p) + form_matrix(ext_d(liouville_form(h)), p)) <= 1e-9);
      }
    }
  }

  TEST_CASE("zero data gives the zero form") {
    CartanTriple tr = conjugation_triple(MatrixGroup::so3());
    tr.rho_star = {zero_form(3, 1), zero_form(3, 1), zero_form(3, 1)};
    tr.phi = Form();
    Form w = general_action_form(tr);
    for (const Vec& p : test::points(6, 4, 11, 0.3)) CHECK(max_abs(form_matrix(w, p)) == 0.0);
  }

  TEST_CASE("chart refuses points outside its radius") {
    MatrixGroup h = MatrixGroup::so3();
    CHECK_THROWS(cartan_dirac_chart(h, Vec::Constant(3, 2.0)));
  }
}
