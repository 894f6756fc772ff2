#include "support.hpp"

#include "dirac/realization.hpp"

using namespace dirac;
using test::vec;

TEST_SUITE("realization") {
  TEST_CASE("rotation plane is quasi-hamiltonian") {
    QuasiHamData q = rotation_plane_qham(0.5);
    auto pts = test::points(2, 16, 1);
    QuasiHamResiduals r = quasi_ham_check(q, pts);
    CHECK(r.r1.value <= 1e-9);
    CHECK(r.r2.value <= 1e-9);
    CHECK(r.r3.value <= 1e-9);
    CHECK(r.invariance.value <= 1e-9);
    CHECK(r.equivariance.value <= 1e-9);
    CHECK_FALSE(r.rank_unstable);
  }

  TEST_CASE("moment condition by direct evaluation") {
    // i_{ρ(1)} η = d(r²/2) for ρ = (y, −x), η = dx∧dy: components (x, y) up to the generator's sign.
    QuasiHamData q = rotation_plane_qham(0.5);
    for (const Vec& p : test::points(2, 6, 2)) {
      Vec v = q.generators[0](p);
      Vec contracted = form_matrix(q.eta, p).transpose() * v;
      CHECK((contracted.cwiseAbs() - p.cwiseAbs()).norm() <= 1e-12);
    }
  }

  TEST_CASE("doubled moment map fails on the unit circle") {
    QuasiHamData q = rotation_plane_qham(1.0);
    std::vector<Vec> circle = {vec({1, 0}), vec({0.6, 0.8}), vec({0, -1})};
    CHECK(quasi_ham_check(q, circle).r2.value >= 0.1);
  }

  TEST_CASE("equivalence cross-check in both directions") {
    CrosscheckReport c = equivalence_crosscheck(rotation_plane_qham(0.5), test::points(2, 16, 3));
    CHECK(c.realization.pass(1e-8));
    CHECK(c.generators.value <= 1e-8);
  }

  TEST_CASE("identity realization") {
    Form w = form_from_strings(Chart(2), 2, {{"12", "1 + x1*x1"}});
    RealizationReport r = realization_check(identity_realization(w), test::points(2, 4, 4));
    CHECK(r.pass(1e-8));
    // ρ_P(X, i_X ω) = X on the coordinate frame.
    CHECK((r.actions[0][0] - Vec::Unit(2, 0)).norm() <= 1e-10);
    CHECK((r.actions[0][1] - Vec::Unit(2, 1)).norm() <= 1e-10);
  }

  TEST_CASE("vanishing eta is degenerate where dmu has a kernel") {
    RealizationData zero{zero_form(2, 2), make_map(2, 1, [](const auto& p) {
                           using T = scalar_of<decltype(p)>;
                           VecX<T> o(1);
                           o[0] = p[0] * p[0] + p[1] * p[1];
                           return o;
                         }),
                         cartan_dirac_field(MatrixGroup::u1()), Form()};
    RealizationReport r = realization_check(zero, {vec({0.3, 0.3})});
    CHECK_FALSE(r.pass(1e-8));
    CHECK(r.degenerate + r.unsolvable > 0);
  }

  TEST_CASE("trivial data at the identity satisfies the moment and invariance conditions") {
    QuasiHamData q = rotation_plane_qham(0.5);
    q.eta = zero_form(2, 2);
    q.mu = constant_map(2, Vec::Zero(1));
    q.generators = {constant_field(2, Vec::Zero(2))};
    // μ ≡ e: Ker(Ad + 1) = 0 and Ker η = T_pP, so r3 compares {0} with the full space: not a degenerate pass.
    // Only the moment condition and the invariance reduce to 0 = 0.
    QuasiHamResiduals r = quasi_ham_check(q, test::points(2, 4, 5));
    CHECK(r.r1.value == 0.0);
    CHECK(r.r2.value <= 1e-15);
    CHECK(r.invariance.value == 0.0);
  }

  TEST_CASE("pair groupoid acting on its base") {
    Form w = form_from_strings(Chart(2), 2, {{"12", "1 + x1*x1"}});
    auto [g, f] = pair_groupoid(w, Form(), Vec::Constant(2, -1), Vec::Constant(2, 1));
    GroupoidActionData act = pair_self_action(g);
    SampleRng rng(6);
    std::vector<Vec> qs;
    for (int i = 0; i < 8; ++i) qs.push_back(act.params.param(rng));
    CHECK(action_compatibility_residual(g, f, w, act, qs).value <= 1e-10);
  }
}
