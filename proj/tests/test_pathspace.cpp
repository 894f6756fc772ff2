#include "support.hpp"

#include "dirac/pathspace.hpp"

using namespace dirac;
using test::vec;

namespace {

SmoothMap curve(std::vector<std::string> c) { return expr_map(c, {"t"}); }

}  // namespace

TEST_SUITE("pathspace") {
  TEST_CASE("omega_phi examples") {
    Chart c(3);
    Form vol = form_from_strings(c, 3, {{"123", "1"}});
    AlgebroidPresentation alg = tangent_algebroid(zero_form(3, 2));
    DiscretizedAPath straight = tangent_path(curve({"t", "0", "0"}), 16);
    PathTangent v = tangent_probe(straight, curve({"0", "1", "0"}));
    PathTangent w = tangent_probe(straight, curve({"0", "0", "1"}));
    CHECK(omega_phi(alg, straight, v, w, vol) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(omega_phi(alg, straight, v, w, Form()) == 0.0);
    CHECK(omega_phi(alg, straight, v, v, vol) == 0.0);
    DiscretizedAPath still = tangent_path(curve({"0.2", "0.1", "0"}), 16);
    CHECK(omega_phi(alg, still, tangent_probe(still, curve({"0", "1", "0"})),
                    tangent_probe(still, curve({"0", "0", "1"})), vol) == 0.0);
  }

  TEST_CASE("sigma_tilde examples") {
    AlgebroidPresentation alg = tangent_algebroid(form_from_strings(Chart(2), 2, {{"12", "1"}}));
    DiscretizedAPath path = tangent_path(curve({"t", "0"}), 16);
    CHECK(std::abs(sigma_tilde(alg, path, tangent_probe(path, curve({"0", "1"})))) ==
          doctest::Approx(1.0).epsilon(1e-14));
    AlgebroidPresentation none = tangent_algebroid(zero_form(2, 2));
    CHECK(sigma_tilde(none, path, tangent_probe(path, curve({"0", "1"}))) == 0.0);
    PathTangent fiber = tangent_probe(path, curve({"0", "0"}));
    fiber.da.assign(fiber.da.size(), vec({0.3, 1.0}));
    CHECK(sigma_tilde(alg, path, fiber) == 0.0);
  }

  TEST_CASE("omega_tilde is antisymmetric and matches the endpoint formula") {
    Chart c(2);
    Form wm = form_from_strings(c, 2, {{"12", "1 + x1*x1"}});
    AlgebroidPresentation alg = tangent_algebroid(wm);
    DiscretizedAPath path = tangent_path(curve({"0.3*t", "t*t"}), 128);
    PathTangent v = tangent_probe(path, curve({"cos(t)", "t"}));
    PathTangent w = tangent_probe(path, curve({"t*t", "1 - t"}));
    double h = fd_step(path);
    CHECK(omega_tilde(alg, path, v, v, h) == doctest::Approx(0).epsilon(1e-12));
    double got = omega_tilde(alg, path, v, w, h);
    // ω̃(V, W) = −(ω_M(V(1), W(1)) − ω_M(V(0), W(0))).
    Vec g0 = path.gamma.front(), g1 = path.gamma.back();
    double want = -(wm.at(g1, {v.dgamma.back(), w.dgamma.back()}) - wm.at(g0, {v.dgamma.front(), w.dgamma.front()}));
    CHECK(std::abs(got - want) <= 1e-3);
  }

  TEST_CASE("gauge vectors") {
    AlgebroidPresentation alg = tangent_algebroid(zero_form(1, 2));
    DiscretizedAPath path = tangent_path(curve({"t"}), 8);
    GaugeParameter eta{expr_map({"0"}, {"t", "x1"})};
    PathTangent z = gauge_vector(alg, path, eta);
    for (std::size_t i = 0; i < z.dgamma.size(); ++i) CHECK(z.dgamma[i].norm() == 0.0);
    GaugeParameter c{expr_map({"0.7"}, {"t", "x1"})};
    PathTangent x = gauge_vector(alg, path, c);
    for (int i = 0; i <= path.intervals(); ++i) {
      double t = path.time(i);
      CHECK(x.dgamma[i][0] == doctest::Approx(t * (1 - t) * 0.7).epsilon(1e-12));
      CHECK(x.da[i][0] == doctest::Approx((1 - 2 * t) * 0.7).epsilon(1e-12));
    }
  }

  TEST_CASE("gauge vector projects to the anchor of eta") {
    Chart c(3);
    Form wm = ext_d(form_from_strings(c, 1, {{"1", "x3"}, {"2", "sin(x1)"}}));
    AlgebroidPresentation alg = tangent_algebroid(wm);
    DiscretizedAPath path = tangent_path(curve({"0.3*sin(2*t)", "t*t - 0.2", "0.5*cos(t)"}), 32);
    GaugeParameter eta{expr_map({"cos(x1) + t", "x2*x3", "sin(2*t) + x1"}, {"t", "x1", "x2", "x3"})};
    PathTangent x = gauge_vector(alg, path, eta);
    SmoothMap sec = eta.section();
    for (int i = 0; i <= path.intervals(); ++i) {
      Vec tx(4);
      tx << path.time(i), path.gamma[i];
      CHECK((x.dgamma[i] - sec(tx)).norm() <= 1e-14);
    }
  }

  TEST_CASE("boundary identity examples") {
    SmoothMap gamma = curve({"t"}), one = curve({"1"});
    CHECK(path_boundary_identity_residual(gamma, one, expr_map({"1"}, {"t", "x1"}), 16, 1e-4) <= 1e-12);
    CHECK(path_boundary_identity_residual(gamma, one, expr_map({"t"}, {"t", "x1"}), 16, 1e-4) <= 1e-12);
    CHECK(path_boundary_identity_residual(gamma, one, expr_map({"0"}, {"t", "x1"}), 16, 1e-4) == 0.0);
    CHECK(path_boundary_identity_residual(curve({"t", "t*t"}), curve({"1", "2*t"}),
                                          expr_map({"x2 + t", "-x1"}, {"t", "x1", "x2"}), 128, 1e-4) <= 1e-6);
  }

  TEST_CASE("convergence study fits the order") {
    Convergence c = convergence_study([](int n) { return 3.0 / (double(n) * n); }, {8, 16, 32});
    CHECK(c.order == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(c.monotone);
    Convergence flat = convergence_study([](int) { return 1.0; }, {8, 16});
    CHECK_FALSE(flat.monotone);
  }

  TEST_CASE("basicness converges at second order") {
    Chart c(3);
    Form wm = ext_d(form_from_strings(c, 1, {{"1", "x3"}, {"2", "sin(x1)"}, {"3", "x1*x2"}}));
    AlgebroidPresentation alg = tangent_algebroid(wm);
    GaugeParameter eta{expr_map({"cos(x1) + t", "x2*x3", "sin(2*t) + x1"}, {"t", "x1", "x2", "x3"})};
    auto run = [&](int n) {
      DiscretizedAPath path = tangent_path(curve({"0.3*sin(2*t)", "t*t - 0.2", "0.5*cos(t)"}), n);
      std::vector<PathTangent> probes = {tangent_probe(path, curve({"cos(t)", "t", "0.2"})),
                                         tangent_probe(path, curve({"t*t", "sin(3*t)", "1 - t"}))};
      return basicness_residual(alg, path, eta, Form(), probes, fd_step(path));
    };
    BasicnessReport r64 = run(64);
    CHECK(r64.basicness <= 5e-4);
    CHECK(r64.lemma52 <= 1e-10);
    CHECK(r64.sigma_contraction <= 1e-10);
    Convergence conv = convergence_study([&](int n) { return run(n).basicness; }, {32, 64, 128});
    CHECK(conv.order >= 1.8);
    CHECK(conv.monotone);
  }

  TEST_CASE("A-path residual and anchor bracket") {
    AlgebroidPresentation alg = tangent_algebroid(form_from_strings(Chart(2), 2, {{"12", "1"}}));
    CHECK(anchor_bracket_residual(alg, test::points(2, 4, 1)) == 0.0);
    CHECK(a_path_residual(alg, tangent_path(curve({"t", "2*t"}), 16)) <= 1e-14);
    DiscretizedAPath bad = sample_path(curve({"t", "0"}), curve({"0", "1"}), 16);
    CHECK(a_path_residual(alg, bad) >= 0.5);
  }
}
