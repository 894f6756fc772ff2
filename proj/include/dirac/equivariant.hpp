#pragma once

#include <vector>

#include "dirac/liegroup.hpp"

namespace dirac {

struct CartanResiduals {
  Residual r1;  // i_{ρ(v)} ρ*(v)
  Residual r2;  // i_{ρ(v)} φ − d ρ*(v)
  Residual r3;  // ρ*([v,w]_A) − L_{ρ(v)} ρ*(w), with [v,w]_A = −[v,w]_𝔥
};

CartanResiduals cartan_closed_residual(const CartanTriple& tr, const std::vector<Vec>& samples);

// g*(ρ*(Ad_g v)) − ρ*(v) at sampled (u_g, x).
Residual group_invariance_residual(const CartanTriple& tr, const std::vector<Vec>& samples);

// g·(h·x) against (gh)·x and e·x against x at sampled (u_g, u_h, x).
Residual action_axiom_residual(const CartanTriple& tr, const std::vector<Vec>& samples);

// Action algebroid 𝔥⋉M with constant sections e_i, anchor ρ(e_i), and ρ*.
AnchoredDual action_anchored_dual(const CartanTriple& tr);

// Restriction of ω to the slice {g}×M at x, as an m×m matrix.
Mat slice_form(const CartanTriple& tr, const Form& omega, const Vec& u, const Vec& x);

// c(hg) − g*c(h) − c(g) at sampled (u_h, u_g, x).
Residual cocycle_residual(const CartanTriple& tr, const Form& omega, const std::vector<Vec>& samples);

// Draws (u_a, u_b, x) with both group coordinates in the triple's group box.
std::vector<Vec> draw_group_pairs(const CartanTriple& tr, SampleRng& rng, int count);
std::vector<Vec> draw_group_points(const CartanTriple& tr, SampleRng& rng, int count);

// R² with the rotation action of U(1) and ρ* = 0, φ = 0.
CartanTriple rotation_plane_triple();
// torus2 acting trivially on R².
CartanTriple trivial_torus_triple();

}  // namespace dirac
