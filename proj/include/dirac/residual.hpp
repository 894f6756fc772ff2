#pragma once

#include <string>
#include <vector>

#include "dirac/numerics.hpp"

namespace dirac {

// Running maximum of a residual together with the sample that produced it.
struct Residual {
  double value = 0.0;
  Vec worst_point;
  bool seen = false;

  void update(double v, const Vec& p) {
    if (!seen || v > value || std::isnan(v)) {
      value = v;
      worst_point = p;
      seen = true;
    }
  }
  void merge(const Residual& o) {
    if (o.seen) update(o.value, o.worst_point);
  }
};

// A rank decision taken at a named sample, kept for reporting.
struct RankDiagnostic {
  std::string where;
  RankInfo info;
};

}  // namespace dirac
