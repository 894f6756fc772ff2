#include "support.hpp"

#include "dirac/courant.hpp"
#include "dirac/foliation.hpp"

using namespace dirac;
using test::vec;

TEST_SUITE("courant") {
  TEST_CASE("constant sections commute") {
    Section a = make_section(constant_field(3, vec({1, 2, 3})), constant_covector(vec({0.5, 0, 1})));
    Section b = make_section(constant_field(3, vec({-1, 0, 2})), constant_covector(vec({0, 1, 1})));
    Section r = courant_bracket(a, b);
    Vec p = vec({0.2, 0.1, -0.3});
    CHECK(r.x(p).norm() == 0.0);
    CHECK(covector(r.xi, p).norm() == 0.0);
  }

  TEST_CASE("twist by the volume form") {
    Chart c(3);
    Form phi = form_from_strings(c, 3, {{"123", "1"}});
    Section a = make_section(constant_field(3, Vec::Unit(3, 0)), zero_form(3, 1));
    Section b = make_section(constant_field(3, Vec::Unit(3, 1)), zero_form(3, 1));
    Section r = courant_bracket(a, b, phi);
    Vec p = vec({0.5, 0.5, 0.5});
    CHECK((covector(r.xi, p) - Vec::Unit(3, 2)).norm() <= 1e-15);
  }

  TEST_CASE("graph closure when dω + φ = 0") {
    Chart c(3);
    Form w = form_from_strings(c, 2, {{"12", "x3*x3"}, {"13", "sin(x2)"}, {"23", "x1*x2"}});
    Form phi = (-1.0) * ext_d(w);
    SmoothMap x = field_from_strings(c, {"x2", "1", "x1*x3"}), y = field_from_strings(c, {"x3", "x1", "0"});
    Section r = courant_bracket(make_section(x, interior(x, w)), make_section(y, interior(y, w)), phi);
    for (const Vec& p : test::points(3, 10, 1)) {
      Vec z = r.x(p);
      CHECK((covector(r.xi, p) - form_matrix(w, p).transpose() * z).norm() <= 1e-9);
      CHECK((z - lie_bracket(x, y)(p)).norm() <= 1e-12);
    }
    CHECK(integrability_residual(graph_field(w), phi, test::points(3, 10, 2)).value <= 1e-9);
  }

  TEST_CASE("graph of a closed form against no twist") {
    Chart c(3);
    Form w = ext_d(form_from_strings(c, 1, {{"1", "x2*x3"}, {"2", "sin(x3)"}}));
    CHECK(integrability_residual(graph_field(w), Form(), test::points(3, 10, 3)).value <= 1e-9);
  }

  TEST_CASE("non-closed graph is detected with the defect as oracle") {
    Chart c(3);
    Form w = form_from_strings(c, 2, {{"12", "x3"}});  // dω = dx∧dy∧dz
    Residual r = integrability_residual(graph_field(w), Form(), test::points(3, 10, 4));
    // Bracket of frame (∂1, i_∂1 ω), (∂2, i_∂2 ω) misses L by exactly dω(∂1, ∂2, ·) = dz.
    CHECK(r.value >= 1e-3);
    CHECK(closedness_residual(form_from_strings(c, 3, {{"123", "x1*x2"}}), test::points(3, 4, 5)) <= 1e-12);
  }

  TEST_CASE("foliation frame is integrable") {
    CoordFoliation f(3, 2);
    CHECK(integrability_residual(foliation_dirac_field(f), Form(), test::points(3, 10, 6)).value == 0.0);
  }

  TEST_CASE("twist consistency") {
    Chart c(3);
    Section a = make_section(field_from_strings(c, {"x2", "x1*x3", "1"}), form_from_strings(c, 1, {{"1", "x3"}}));
    Section b = make_section(field_from_strings(c, {"sin(x3)", "1", "x1"}), form_from_strings(c, 1, {{"2", "x1"}}));
    Form phi = form_from_strings(c, 3, {{"123", "1 + x1*x2"}});
    Section t = courant_bracket(a, b, phi), u = courant_bracket(a, b);
    for (const Vec& p : test::points(3, 10, 7)) {
      Vec want(3);
      for (int k = 0; k < 3; ++k) want[k] = phi.at(p, {a.x(p), b.x(p), Vec::Unit(3, k)});
      CHECK((covector(t.xi, p) - covector(u.xi, p) - want).norm() <= 1e-14);
    }
  }

  TEST_CASE("skew up to an exact term on closed sections") {
    Chart c(3);
    Form xi = ext_d(form_from_strings(c, 0, {{"", "x1*x2*x3 + sin(x1)"}}));
    Form eta = ext_d(form_from_strings(c, 0, {{"", "exp(x2)*x3"}}));
    Section a = make_section(field_from_strings(c, {"x2", "x1*x3", "1"}), xi);
    Section b = make_section(field_from_strings(c, {"sin(x3)", "1", "x1"}), eta);
    Section ab = courant_bracket(a, b), ba = courant_bracket(b, a);
    Form exact = ext_d(pair(xi, b.x) + pair(eta, a.x));
    for (const Vec& p : test::points(3, 10, 8))
      CHECK((covector(ab.xi, p) + covector(ba.xi, p) - covector(exact, p)).norm() <= 1e-9);
  }

  TEST_CASE("frame errors") {
    AlmostDiracField bad{{make_section(constant_field(2, vec({1, 0})), constant_covector(vec({1, 0}))),
                          make_section(constant_field(2, vec({0, 1})), zero_form(2, 1))}};
    CHECK_THROWS_AS(bad.at(vec({0, 0})), FrameError);
  }
}

#include "dirac/pathspace.hpp"

TEST_SUITE("courant") {
  TEST_CASE("IM conditions") {
    Chart c(3);
    Form closed = ext_d(form_from_strings(c, 1, {{"1", "x2*x3"}, {"2", "sin(x3)"}}));
    ImResiduals r = im_conditions_residual(tangent_algebroid(closed), Form(), test::points(3, 8, 9));
    CHECK(r.r1.value <= 1e-8);
    CHECK(r.r2.value <= 1e-8);
    Form w = form_from_strings(c, 2, {{"12", "2 + x3"}, {"13", "x1*x2"}, {"23", "sin(x1)"}});
    ImResiduals t = im_conditions_residual(tangent_algebroid(w), (-1.0) * ext_d(w), test::points(3, 8, 10));
    CHECK(t.r1.value <= 1e-8);
    CHECK(t.r2.value <= 1e-8);
    ImResiduals z = im_conditions_residual(tangent_algebroid(zero_form(3, 2)), Form(), test::points(3, 4, 11));
    CHECK(z.r1.value == 0.0);
    CHECK(z.r2.value == 0.0);
    // Non-closed ρ* without its twist violates the second condition.
    CHECK(im_conditions_residual(tangent_algebroid(w), Form(), test::points(3, 8, 12)).r2.value >= 1e-3);
  }
}
