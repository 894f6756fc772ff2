#pragma once

#include <doctest.h>

#include <cmath>
#include <vector>

#include "dirac/geometry.hpp"
#include "dirac/numerics.hpp"

namespace test {

using dirac::Mat;
using dirac::Vec;

inline Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  int i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

inline std::vector<Vec> points(int n, int count, std::uint64_t seed, double r = 1.0) {
  dirac::SampleRng rng(seed);
  std::vector<Vec> out;
  for (int i = 0; i < count; ++i) out.push_back(rng.uniform_vec(n, -r, r));
  return out;
}

// Central difference of a scalar function along direction d.
template <class F>
double central(F f, const Vec& x, const Vec& d, double h) {
  return (f(Vec(x + h * d)) - f(Vec(x - h * d))) / (2 * h);
}

// Exterior derivative of a form by central differences of its components:
// dω(v0..vk) = Σ_i (−1)^i ∂_{v_i} ω(v0..v̂i..vk) for constant vectors.
inline double fd_ext_d(const dirac::Form& w, const Vec& x, const std::vector<Vec>& vs, double h = 1e-5) {
  double acc = 0.0;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    std::vector<Vec> rest;
    for (std::size_t j = 0; j < vs.size(); ++j)
      if (j != i) rest.push_back(vs[j]);
    auto f = [&](const Vec& p) { return w(p, std::span<const Vec>(rest)); };
    acc += (i % 2 ? -1.0 : 1.0) * central(f, x, vs[i], h);
  }
  return acc;
}

}  // namespace test
