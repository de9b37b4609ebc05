#pragma once
// Special functions and vertical-line quadrature.
//
//   complex_gamma           Lanczos approximation, reflection for Re z < 1/2
//   hurwitz_zeta            Euler-Maclaurin with order-12 tail corrections
//   vertical_line_integral  (1/2 pi i) int_{(c)} f(s) ds by composite
//                           Gauss-Legendre panels on |Im s| <= T
//
// Everything here is pure and reentrant; the Gauss-Legendre node cache is
// guarded internally.

#include <functional>
#include <vector>

#include "lmom/arith.hpp"

namespace lmom {

// Gamma function, >= 1e-12 relative accuracy for |z| <= 50 away from poles.
// Throws domain_error at nonpositive integers.
cplx complex_gamma(cplx z);

// zeta(s, a) = sum_{n>=0} (n+a)^{-s}, continued past Re s <= 1.
// Requires a in (0, 1] and s != 1; valid down to Re s > -24.
cplx hurwitz_zeta(cplx s, double a);

inline cplx riemann_zeta(cplx s) { return hurwitz_zeta(s, 1.0); }

// Gauss-Legendre nodes and weights on [-1, 1], cached per order.
struct GaussLegendre {
  std::vector<double> node;
  std::vector<double> weight;
};
const GaussLegendre& gauss_legendre(int n);

struct ContourSpec {
  double real_part = 1.0;          // abscissa c
  double truncation_height = 30.0; // requested |Im s| cutoff; the quadrature
                                   // extends past it until the integrand has
                                   // decayed, and errors out if it never does
  int node_count = 16;             // Gauss-Legendre order per unit-width panel
};

struct LineIntegral {
  cplx value;        // (1/2 pi i) int_{c-iT}^{c+iT} f(s) ds
  double truncation; // estimated modulus of the discarded |Im s| > T tail
};

// The integrand must decay in |Im s| along the line: if its magnitude at the
// running cutoff stays above 1e-13 of its peak after extending to 8x the
// requested height, a domain_error is raised.
LineIntegral vertical_line_integral(const std::function<cplx(cplx)>& f,
                                    const ContourSpec& spec);

}  // namespace lmom
