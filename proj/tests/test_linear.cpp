#include "support.hpp"

#include "dirac/linear.hpp"

using namespace dirac;
using test::vec;

namespace {

// L spanned by columns of [top; bottom].
LinearDirac span_of(const Mat& top, const Mat& bottom) {
  Mat s(top.rows() + bottom.rows(), top.cols());
  s << top, bottom;
  return LinearDirac::from_span(s);
}

// Every column of `cand` is in L, checked by the pairing test against L's basis.
bool brute_member(const LinearDirac& l, const Vec& x, const Vec& xi) {
  return l.contains({x, xi}, 1e-9);
}

}  // namespace

TEST_SUITE("linear") {
  TEST_CASE("pairing") {
    CHECK(pairing({vec({1, 0}), vec({0, 0})}, {vec({0, 0}), vec({1, 0})}) == doctest::Approx(1));
    Vec v = vec({0.3, -1.2}), xi = vec({2.0, 0.5});
    CHECK(pairing({v, xi}, {v, xi}) == doctest::Approx(2 * xi.dot(v)));
    CHECK(pairing({vec({1, 0}), vec({0, 1})}, {vec({0, 1}), vec({-1, 0})}) == doctest::Approx(0));
  }

  TEST_CASE("graph of zero form") {
    InducedData d = induced(from_form(Mat::Zero(3, 3)));
    CHECK(d.range.cols() == 3);
    CHECK(d.kernel.cols() == 3);
    CHECK(max_abs(d.theta_ambient) == doctest::Approx(0));
  }

  TEST_CASE("standard symplectic graph basis") {
    Mat theta(2, 2);
    theta << 0, 1, -1, 0;
    Mat top = Mat::Identity(2, 2), bottom(2, 2);
    bottom << 0, -1, 1, 0;  // (e1, e2*), (e2, −e1*)
    LinearDirac stated = span_of(top, bottom);
    CHECK(stated.isotropy_defect() <= 1e-15);
    CHECK(from_form(theta) == stated);
  }

  TEST_CASE("forms give full range, bivectors trivial kernel") {
    SampleRng rng(3);
    for (int c = 0; c < 20; ++c) {
      CHECK(induced(from_form(rng.skew(4))).range.cols() == 4);
      CHECK(induced(from_bivector(rng.skew(3))).kernel.cols() == 0);
    }
    InducedData z = induced(from_bivector(Mat::Zero(3, 3)));
    CHECK(z.range.cols() == 0);
    CHECK(z.covectors.cols() == 3);
  }

  TEST_CASE("invertible bivector graph is a form graph") {
    // Graph {(πξ, ξ)}; v = πξ gives ξ = π⁻¹v, and θ(v,·) = θᵀv = −θv, so θ = −π⁻¹.
    Mat pi(2, 2);
    pi << 0, 2.5, -2.5, 0;
    Mat inv(2, 2);
    inv << 0, -1 / 2.5, 1 / 2.5, 0;
    CHECK(max_abs(Mat(pi * inv) - Mat::Identity(2, 2)) <= 1e-15);
    CHECK(from_bivector(pi) == from_form(Mat(-inv)));
    for (int i = 0; i < 2; ++i) {
      Vec xi = Vec::Unit(2, i);
      CHECK(brute_member(from_bivector(pi), pi * xi, xi));
    }
  }

  TEST_CASE("form round trip and isotropy") {
    SampleRng rng(5);
    for (int c = 0; c < 100; ++c) {
      int n = 1 + c % 6;
      Mat theta = rng.skew(n);
      LinearDirac l = from_form(theta);
      CHECK(l.isotropy_defect() <= 1e-12);
      CHECK(l.basis().cols() == n);
      CHECK(max_abs(induced(l).theta_ambient - theta) <= 1e-12);
      // Membership of (v, θ(v,·)) by brute force.
      Vec v = rng.uniform_vec(n, -1, 1);
      CHECK(brute_member(l, v, theta.transpose() * v));
    }
  }

  TEST_CASE("canonical equality ignores the spanning basis") {
    SampleRng rng(9);
    LinearDirac l = from_bivector(rng.skew(4));
    Mat mix = rng.matrix(4, 4) + 3 * Mat::Identity(4, 4);
    CHECK(LinearDirac::from_span(Mat(l.basis() * mix)) == l);
  }

  TEST_CASE("non-isotropic span is rejected") {
    // span{(e1, e2*), (0, e1*)} pairs to 1.
    Mat top(2, 2), bottom(2, 2);
    top << 1, 0, 0, 0;
    bottom << 0, 1, 1, 0;
    CHECK_THROWS_AS(span_of(top, bottom), NotDiracError);
  }

  TEST_CASE("range and kernel of a degenerate structure") {
    // span{(e1, 0), (0, e2*)}: range = span(e1) = kernel.
    Mat top(2, 2), bottom(2, 2);
    top << 1, 0, 0, 0;
    bottom << 0, 0, 0, 1;
    InducedData d = induced(span_of(top, bottom));
    CHECK(d.range.cols() == 1);
    CHECK(d.kernel.cols() == 1);
    CHECK(std::abs(d.range(0, 0)) == doctest::Approx(1));
    CHECK(std::abs(d.kernel(0, 0)) == doctest::Approx(1));
    CHECK(d.covectors.cols() == 1);
  }

  TEST_CASE("push forward examples") {
    SampleRng rng(13);
    LinearDirac l = from_bivector(rng.skew(3));
    CHECK(push_forward(Mat::Identity(3, 3), l) == l);
    LinearDirac zero = push_forward(Mat::Zero(2, 3), l);
    CHECK(zero == from_bivector(Mat::Zero(2, 2)));
    Mat theta(2, 2);
    theta << 0, 1, -1, 0;
    Mat psi(1, 2);
    psi << 1, 0;
    CHECK(push_forward(psi, from_form(theta)) == from_bivector(Mat::Zero(1, 1)));
  }

  TEST_CASE("push forward of a Poisson structure is the pushed bivector") {
    SampleRng rng(17);
    for (int c = 0; c < 20; ++c) {
      Mat pi = rng.skew(4);
      Mat psi = rng.matrix(2, 4);
      CHECK(span_distance(push_forward(psi, from_bivector(pi)), from_bivector(Mat(psi * pi * psi.transpose()))) <=
            1e-9);
    }
  }

  TEST_CASE("push forward preserves maximal isotropy or reports degeneracy") {
    SampleRng rng(19);
    int ok = 0;
    for (int c = 0; c < 200; ++c) {
      int n = 1 + c % 5, m = 1 + (3 * c) % 5;
      LinearDirac l = c % 2 ? from_form(rng.skew(n)) : from_bivector(rng.skew(n));
      try {
        LinearDirac p = push_forward(rng.matrix(m, n), l);
        CHECK(p.isotropy_defect() <= 1e-9);
        CHECK(p.basis().cols() == m);
        ++ok;
      } catch (const DegeneratePushForward&) {
      }
    }
    CHECK(ok > 0);
  }

  TEST_CASE("pull back examples") {
    SampleRng rng(23);
    LinearDirac l = from_form(rng.skew(3));
    CHECK(pull_back(Mat::Identity(3, 3), l) == l);
    Mat theta(2, 2);
    theta << 0, 1, -1, 0;
    Mat incl(2, 1);
    incl << 1, 0;
    CHECK(pull_back(incl, from_form(theta)) == from_form(Mat::Zero(1, 1)));
    // f = 0 into V⊕0: every (v, 0) qualifies.
    CHECK(pull_back(Mat::Zero(2, 2), from_form(Mat::Zero(2, 2))) == from_form(Mat::Zero(2, 2)));
  }

  TEST_CASE("pull back of a form is the pulled back form") {
    SampleRng rng(29);
    for (int c = 0; c < 20; ++c) {
      Mat theta = rng.skew(4);
      Mat f = rng.matrix(4, 2);
      CHECK(span_distance(pull_back(f, from_form(theta)), from_form(Mat(f.transpose() * theta * f))) <= 1e-9);
    }
  }

  TEST_CASE("pull back after push forward by an invertible map") {
    SampleRng rng(31);
    for (int c = 0; c < 50; ++c) {
      int n = 1 + c % 6;
      LinearDirac l = gauge_transform(from_bivector(rng.skew(n)), rng.skew(n));
      Mat f = rng.matrix(n, n) + 3 * Mat::Identity(n, n);
      CHECK(span_distance(pull_back(f, push_forward(f, l)), l) <= 1e-8);
    }
  }

  TEST_CASE("Dirac maps") {
    SampleRng rng(37);
    LinearDirac l = from_bivector(rng.skew(3));
    CHECK(is_dirac_map(Mat::Identity(3, 3), l, l));
    Mat pi = rng.skew(3);
    Mat psi = rng.matrix(2, 3);
    CHECK(is_dirac_map(psi, from_bivector(pi), from_bivector(Mat(psi * pi * psi.transpose()))));
    Mat theta(2, 2);
    theta << 0, 1, -1, 0;
    CHECK_FALSE(is_dirac_map(Mat::Zero(2, 2), from_form(Mat::Zero(2, 2)), from_form(theta)));
  }

  TEST_CASE("gauge transform shifts forms") {
    SampleRng rng(41);
    Mat a = rng.skew(4), b = rng.skew(4);
    CHECK(span_distance(gauge_transform(from_form(a), b), from_form(Mat(a + b))) <= 1e-12);
  }

  TEST_CASE("dimension consistency") {
    SampleRng rng(43);
    for (int c = 0; c < 60; ++c) {
      int n = 1 + c % 6;
      LinearDirac l = gauge_transform(from_bivector(rng.skew(n)), c % 3 ? rng.skew(n) : Mat::Zero(n, n));
      InducedData d = induced(l);
      CHECK(d.covectors.cols() == n - d.kernel.cols());
    }
  }

  TEST_CASE("metric lowering and json round trip") {
    Mat g(2, 2);
    g << 2, 0.5, 0.5, 1;
    Vec v = vec({0.3, -0.7});
    CHECK((raise(g, lower(g, v)) - v).norm() <= 1e-14);
    SampleRng rng(47);
    LinearDirac l = from_bivector(rng.skew(3));
    CHECK(linear_dirac_from_json(to_json(l)) == l);
  }
}
