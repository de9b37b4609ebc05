#pragma once
// ============================================================================
// weights: archimedean factors for the shifted sixth moment.
//
//     G(s; alpha, beta) = prod_j Gamma((s+alpha_j)/2) Gamma((s-beta_j)/2)
//     H(s; alpha, beta) = prod_{i,j} (s^2 - ((alpha_i-beta_j)/2)^2)
//
// and the two-variable cutoff
//
//     W_{alpha,beta}(xi, eta; mu)
//         = (mu/pi)^delta (1/2pi i) int_{(c)} G(1/2+s) H(s) X^{-s} ds/s,
//     X = xi eta pi^3 / mu^3,
//
// an even-polynomial-mollified Mellin cutoff: W ~ G(1/2)H(0) as X -> 0 and
// decays like exp(-c X^{1/3}) as X -> infinity (saddle point of the Gamma
// product).  H kills the would-be gamma poles' cancellation problem in the
// moment formulas; degree 18 with simple zeros at the shift gaps.
// ============================================================================

#include "lmom/analysis.hpp"
#include "lmom/shifts.hpp"

namespace lmom {

struct WeightEvaluation {
  cplx value;
  double contour_abscissa = 1.0;       // line actually integrated over
  double truncation_remainder = 0.0;   // quadrature tail + contour-error estimate
};

// Six-fold Gamma product; a pole at any of the six arguments propagates the
// gamma evaluator's rejection.
cplx g_factor(cplx s, const Shifts& t);

// Degree-18 even polynomial vanishing to first order at each (alpha_i-beta_j)/2.
cplx h_poly(cplx s, const Shifts& t);

// W as above.  For X >= 4 the requested contour (default Re s = 1) is
// integrated directly.  Below that the direct line computes a value far below
// its own integrand, so the contour is pushed to Re s = -3/2 with the crossed
// singularities kept explicitly: the residue G(1/2)H(0) at s = 0 plus a
// trapezoidal circle around the six gamma poles near s = -1/2; the reported
// abscissa is then -3/2.  Shifts of magnitude > 0.3 would collide with that
// circle and are rejected in the rerouted regime.
WeightEvaluation w_weight(double xi, double eta, double mu, const Shifts& t,
                          const ContourSpec& contour = {});

// The inner Mellin integral depends on (xi, eta, mu) only through X, so big
// sweeps (diagonal sums, coefficient-sum evaluations with millions of (m,n)
// pairs) interpolate it once per shift configuration: a single Chebyshev
// expansion in ln X.  The integral is entire in ln X (the Gamma decay
// e^{-3pi|t|/2} dominates any e^{|Im ln X| |t|} with |Im ln X| < 3pi/2), so a
// few hundred nodes reach quadrature-level accuracy over many decades of X.
class WeightTable {
 public:
  WeightTable(const Shifts& t, double x_min, double x_max, int nodes = 256);

  // (mu/pi)^delta * I(X) with X = xi eta pi^3/mu^3; X above x_max returns 0
  // (the table is built out to where the cutoff is negligible), X below x_min
  // is rejected.
  cplx weight(double xi, double eta, double mu) const;

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }

 private:
  cplx integral_at(double ln_x) const;

  double x_min_, x_max_;
  double ln_lo_, ln_hi_;
  cplx delta_;
  std::vector<cplx> coeff_;
};

}  // namespace lmom
