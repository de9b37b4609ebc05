#pragma once
// Shift tuples (alpha, beta) feeding the six-fold product
//
//     Lambda(chi; alpha, beta) = prod_j Lambda(1/2 + alpha_j, chi)
//                                       Lambda(1/2 - beta_j, conj(chi)),
//
// together with delta = (1/2) sum_j (alpha_j - beta_j), the exponent that
// scales (q/pi)^delta in front of the completed product.

#include <algorithm>
#include <cmath>

#include "lmom/arith.hpp"

namespace lmom {

struct Shifts {
  Shift3 alpha{};
  Shift3 beta{};

  cplx delta() const {
    cplx d = 0.0;
    for (int j = 0; j < 3; ++j) d += alpha[j] - beta[j];
    return 0.5 * d;
  }

  // Main-term formulas divide by products of (alpha_i - beta_j); callers on
  // that path must insist on separation.  The L-product itself is fine with
  // collisions, so construction does not validate.
  bool pairwise_distinct(double eps) const {
    for (const cplx& a : alpha)
      for (const cplx& b : beta)
        if (std::abs(a - b) <= eps) return false;
    return true;
  }

  double max_magnitude() const {
    double m = 0.0;
    for (int j = 0; j < 3; ++j)
      m = std::max({m, std::abs(alpha[j]), std::abs(beta[j])});
    return m;
  }
};

}  // namespace lmom
