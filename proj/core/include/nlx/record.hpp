#pragma once

#include <limits>

#include "nlx/discretize.hpp"

namespace nlx {

// One converged point (λ, γ, u, v) on a minimal branch.
struct BranchRecord {
  double lambda = 0.0;
  double gamma = 0.0;
  GridFunction u, v;
  int newton_iters = 0;
  int monotone_iters = 0;
  double stability_indicator = std::numeric_limits<double>::quiet_NaN();
  double residual_norm = 0.0;

  double sup_u() const { return u.size() ? u.maxCoeff() : 0.0; }
  double sup_v() const { return v.size() ? v.maxCoeff() : 0.0; }
};

}  // namespace nlx
