#include "support.hpp"

#include "dirac/equivariant.hpp"

using namespace dirac;
using test::vec;

namespace {

std::vector<Vec> draw(const CartanTriple& tr, std::uint64_t seed, int n = 8) {
  SampleRng rng(seed);
  std::vector<Vec> out;
  for (int i = 0; i < n; ++i) out.push_back(tr.points.draw(rng));
  return out;
}

}  // namespace

TEST_SUITE("equivariant") {
  TEST_CASE("AMM data is equivariantly closed") {
    for (const auto& name : {"so3", "su2"}) {
      CartanTriple tr = conjugation_triple(MatrixGroup::by_name(name));
      CartanResiduals r = cartan_closed_residual(tr, draw(tr, 1));
      CHECK(r.r1.value <= 1e-8);
      CHECK(r.r2.value <= 1e-8);
      CHECK(r.r3.value <= 1e-8);
    }
  }

  TEST_CASE("coadjoint data is equivariantly closed") {
    CartanTriple tr = coadjoint_triple(MatrixGroup::so3());
    CartanResiduals r = cartan_closed_residual(tr, draw(tr, 2));
    CHECK(r.r1.value <= 1e-10);
    CHECK(r.r2.value <= 1e-10);
    CHECK(r.r3.value <= 1e-10);
  }

  TEST_CASE("coadjoint pairing oracle") {
    // ⟨v, ad*_v ξ⟩ = (ξ, [v, v]) = 0.
    MatrixGroup h = MatrixGroup::so3();
    CartanTriple tr = coadjoint_triple(h);
    for (const Vec& x : draw(tr, 3))
      for (int i = 0; i < 3; ++i) {
        Vec rho = generator(tr, i)(x);
        CHECK(std::abs(Vec::Unit(3, i).dot(h.metric() * rho)) <= 1e-12);
      }
  }

  TEST_CASE("zero data") {
    CartanTriple tr = rotation_plane_triple();
    tr.rho_star = {zero_form(tr.m, 1)};
    tr.phi = Form();
    CartanResiduals r = cartan_closed_residual(tr, draw(tr, 4));
    CHECK(r.r1.value == 0.0);
    CHECK(r.r2.value == 0.0);
    CHECK(r.r3.value == 0.0);
  }

  TEST_CASE("group invariance and the action axiom") {
    for (const CartanTriple& tr : {conjugation_triple(MatrixGroup::so3()), coadjoint_triple(MatrixGroup::su2()),
                                   rotation_plane_triple()}) {
      SampleRng rng(5);
      CHECK(group_invariance_residual(tr, draw_group_points(tr, rng, 8)).value <= 1e-9);
      CHECK(action_axiom_residual(tr, draw_group_pairs(tr, rng, 8)).value <= 1e-9);
    }
  }

  TEST_CASE("slice restrictions and cocycles") {
    MatrixGroup h = MatrixGroup::so3();
    CartanTriple tr = conjugation_triple(h);
    Form w = general_action_form(tr);
    SampleRng rng(6);
    auto pairs = draw_group_pairs(tr, rng, 8);
    for (const Vec& q : pairs) CHECK(max_abs(slice_form(tr, w, q.head(3), q.segment(3, 3))) <= 1e-10);
    CHECK(cocycle_residual(tr, w, pairs).value <= 1e-10);

    CartanTriple co = coadjoint_triple(h);
    auto g = action_groupoid(co);
    GroupoidForm f{general_action_form(co), co.phi, Form()};
    Form b = form_from_strings(Chart(3), 2, {{"23", "1 + x1*x1"}});
    GroupoidForm gf = gauge(g, f, b);
    SampleRng rng2(7);
    CHECK(cocycle_residual(co, gf.omega, draw_group_pairs(co, rng2, 8)).value <= 1e-9);
  }

  TEST_CASE("abelian trivial action gives an additive cocycle") {
    CartanTriple tt = trivial_torus_triple();
    Form w = make_form(4, 2, [](const auto& p, auto vs) -> scalar_of<decltype(p)> {
      return p[0] * (vs[0][2] * vs[1][3] - vs[0][3] * vs[1][2]);
    });
    SampleRng rng(8);
    CHECK(cocycle_residual(tt, w, draw_group_pairs(tt, rng, 8)).value <= 1e-12);
  }

  TEST_CASE("the constructed forms are multiplicative and relatively closed") {
    for (const CartanTriple& tr : {conjugation_triple(MatrixGroup::su2()), coadjoint_triple(MatrixGroup::so3()),
                                   rotation_plane_triple()}) {
      auto g = action_groupoid(tr);
      GroupoidForm f{general_action_form(tr), tr.phi, Form()};
      SamplePolicy pol;
      pol.samples = 8;
      GroupoidSamples smp = draw_samples(g, pol);
      CHECK(check_multiplicative(g, f, smp).value <= 1e-8);
      CHECK(check_rel_closed(g, f, smp).value <= 1e-8);
      ImResiduals im = im_conditions_residual(action_anchored_dual(tr), tr.phi, draw(tr, 9));
      CHECK(im.r1.value <= 1e-8);
      CHECK(im.r2.value <= 1e-8);
    }
  }
}
