#include "support.hpp"

using namespace dirac;
using test::vec;

namespace {

Mat fd_jacobian(const SmoothMap& f, const Vec& x, double h = 1e-5) {
  Mat j(f.out_dim(), x.size());
  for (int k = 0; k < x.size(); ++k) {
    Vec d = Vec::Unit(x.size(), k) * h;
    j.col(k) = (f(Vec(x + d)) - f(Vec(x - d))) / (2 * h);
  }
  return j;
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("bracket examples") {
    Chart c(2);
    SmoothMap dx = field_from_strings(c, {"1", "0"}), dy = field_from_strings(c, {"0", "1"});
    SmoothMap xdy = field_from_strings(c, {"0", "x1"});
    for (const Vec& p : test::points(2, 5, 1)) {
      CHECK(lie_bracket(dx, dy)(p).norm() == doctest::Approx(0));
      CHECK((lie_bracket(xdy, dx)(p) - vec({0, -1})).norm() <= 1e-14);
      CHECK(lie_bracket(xdy, xdy)(p).norm() == doctest::Approx(0));
    }
  }

  TEST_CASE("bracket agrees with finite differences") {
    Chart c(3);
    SmoothMap x = field_from_strings(c, {"x2*x3", "sin(x1)", "x1*x1"});
    SmoothMap y = field_from_strings(c, {"exp(x3)", "x1 - x2", "x2*x2*x3"});
    for (const Vec& p : test::points(3, 10, 2)) {
      Vec fd = fd_jacobian(y, p) * x(p) - fd_jacobian(x, p) * y(p);
      CHECK((lie_bracket(x, y)(p) - fd).lpNorm<Eigen::Infinity>() <= 1e-8);
    }
  }

  TEST_CASE("Jacobi identity on polynomial fields") {
    Chart c(3);
    SmoothMap x = field_from_strings(c, {"x2*x3", "x1*x1", "x3"});
    SmoothMap y = field_from_strings(c, {"1 + x3*x3", "x1*x2", "x2"});
    SmoothMap z = field_from_strings(c, {"x1", "x3*x1*x2", "x2*x2 - x1"});
    SmoothMap j1 = lie_bracket(x, lie_bracket(y, z)), j2 = lie_bracket(y, lie_bracket(z, x)),
              j3 = lie_bracket(z, lie_bracket(x, y));
    for (const Vec& p : test::points(3, 50, 3)) CHECK((j1(p) + j2(p) + j3(p)).norm() <= 1e-10);
  }

  TEST_CASE("exterior derivative examples") {
    Chart c(3);
    Vec e1 = Vec::Unit(3, 0), e2 = Vec::Unit(3, 1), e3 = Vec::Unit(3, 2);
    Vec p = vec({0.3, 0.7, -0.2});
    Form d1 = ext_d(form_from_strings(c, 1, {{"2", "x1"}}));
    CHECK(d1.at(p, {e1, e2}) == doctest::Approx(1));
    CHECK(d1.at(p, {e1, e3}) == doctest::Approx(0));
    CHECK(ext_d(form_from_strings(c, 3, {{"123", "1"}})).at(p, {e1, e2, e3, e1}) == doctest::Approx(0));
    CHECK(max_abs(form_components(ext_d(form_from_strings(c, 2, {{"12", "x2"}})), p)) == doctest::Approx(0));
    CHECK(ext_d(form_from_strings(c, 2, {{"12", "x3"}})).at(p, {e1, e2, e3}) == doctest::Approx(1));
  }

  TEST_CASE("exterior derivative agrees with finite differences") {
    Chart c(3);
    Form w = form_from_strings(c, 2, {{"12", "x3*sin(x1)"}, {"13", "x2*x2"}, {"23", "exp(x1*x3)"}});
    Form a = form_from_strings(c, 1, {{"1", "sin(x2*x3)"}, {"3", "x1*x2*x2"}});
    SampleRng rng(4);
    for (const Vec& p : test::points(3, 10, 5)) {
      Vec u = rng.uniform_vec(3, -1, 1), v = rng.uniform_vec(3, -1, 1), z = rng.uniform_vec(3, -1, 1);
      CHECK(ext_d(w).at(p, {u, v, z}) == doctest::Approx(test::fd_ext_d(w, p, {u, v, z})).epsilon(1e-7));
      CHECK(ext_d(a).at(p, {u, v}) == doctest::Approx(test::fd_ext_d(a, p, {u, v})).epsilon(1e-7));
    }
  }

  TEST_CASE("d squared vanishes") {
    Chart c(3);
    std::vector<Form> catalog = {
        form_from_strings(c, 0, {{"", "sin(x1*x2) + x3^3"}}),
        form_from_strings(c, 1, {{"1", "sin(x2*x3)"}, {"3", "x1*x2*x2"}}),
        form_from_strings(c, 2, {{"12", "x3*sin(x1)"}, {"13", "x2*x2"}, {"23", "exp(x1*x3)"}}),
    };
    for (const auto& w : catalog)
      for (const Vec& p : test::points(3, 10, 6)) CHECK(max_abs(form_components(ext_d(ext_d(w)), p)) <= 1e-12);
  }

  TEST_CASE("interior and Lie derivative examples") {
    Chart c(2);
    SmoothMap dx = field_from_strings(c, {"1", "0"});
    Vec p = vec({0.4, -0.9});
    Vec dy = vec({0, 1});
    CHECK((covector(interior(dx, form_from_strings(c, 2, {{"12", "1"}})), p) - dy).norm() <= 1e-15);
    CHECK((covector(lie_derivative(dx, form_from_strings(c, 1, {{"2", "x1"}})), p) - dy).norm() <= 1e-15);
  }

  TEST_CASE("repeated arguments give zero") {
    Chart c(3);
    Form w = form_from_strings(c, 2, {{"12", "x3"}, {"23", "x1"}});
    Vec v = vec({0.1, 0.2, 0.3});
    CHECK(w.at(v, {v, v}) == 0.0);
  }

  TEST_CASE("Lie derivative agrees with a finite-difference flow") {
    Chart c(3);
    SmoothMap x = field_from_strings(c, {"x2", "-x1 + x3*x3", "sin(x1)"});
    Form w = form_from_strings(c, 2, {{"12", "x3*x1"}, {"13", "cos(x2)"}, {"23", "x1*x2"}});
    Form lx = lie_derivative(x, w);
    SampleRng rng(8);
    const double h = 1e-4;
    for (const Vec& p : test::points(3, 10, 9)) {
      Vec u = rng.uniform_vec(3, -1, 1), v = rng.uniform_vec(3, -1, 1);
      Mat dx = fd_jacobian(x, p);
      auto pulled = [&](double t) {
        return w.at(Vec(p + t * x(p)), {Vec(u + t * dx * u), Vec(v + t * dx * v)});
      };
      double fd = (pulled(h) - pulled(-h)) / (2 * h);
      CHECK(std::abs(lx.at(p, {u, v}) - fd) <= 1e-6);
      // Cartan formula: L_X = d i_X + i_X d.
      Form cartan = ext_d(interior(x, w)) + interior(x, ext_d(w));
      CHECK(std::abs(lx.at(p, {u, v}) - cartan.at(p, {u, v})) <= 1e-12);
    }
  }

  TEST_CASE("pullback is natural and trivial along the identity") {
    Chart c(3);
    Form w = form_from_strings(c, 1, {{"1", "x2*x3"}, {"2", "sin(x1)"}, {"3", "x1*x1"}});
    SmoothMap f = expr_map({"x1*x2", "sin(x2)", "x1 + x2*x2"}, {"x1", "x2"});
    for (const Vec& p : test::points(2, 10, 10)) {
      Vec e1 = Vec::Unit(2, 0), e2 = Vec::Unit(2, 1);
      CHECK(std::abs(pullback(f, ext_d(w)).at(p, {e1, e2}) - ext_d(pullback(f, w)).at(p, {e1, e2})) <= 1e-10);
    }
    for (const Vec& p : test::points(3, 5, 11))
      CHECK((covector(pullback(identity_map(3), w), p) - covector(w, p)).norm() <= 1e-15);
  }

  TEST_CASE("pullback matches the chain rule") {
    Chart c(2);
    Form w = form_from_strings(c, 2, {{"12", "x1*x2 + 1"}});
    SmoothMap f = expr_map({"x1 + x2*x2", "x1*x2"}, {"x1", "x2"});
    for (const Vec& p : test::points(2, 5, 12)) {
      Mat j = fd_jacobian(f, p);
      double want = w.at(f(p), {Vec(j.col(0)), Vec(j.col(1))});
      CHECK(pullback(f, w).at(p, {Vec::Unit(2, 0), Vec::Unit(2, 1)}) == doctest::Approx(want).epsilon(1e-8));
    }
  }
}
