#pragma once
// ============================================================================
// expsums: complete exponential sums and Poisson-summation identities.
//
//     S(a,b;c)      = sum*_{x mod c} e((ax + b xbar)/c)        (Kloosterman)
//     KS(f,g,h;r)   = sum*sum*_{a,b mod r} e((af + bg + (ab)bar h)/r)
//     r_r(n)        = sum*_{a mod r} e(an/r)                   (Ramanujan)
//                   = mu(r/(n,r)) phi(r)/phi(r/(n,r))
//
// plus residual checks for the three progression-Poisson identities used to
// flatten the off-diagonal sums: a sieved progression against its dual, the
// same with an inverse phase (dual side picks up S), and the Kloosterman-sum
// layer (dual side picks up KS).  All sums are evaluated directly over units;
// the verification ranges are small enough that O(r) and O(r^2) loops beat
// any cleverness.
// ============================================================================

#include "lmom/arith.hpp"

namespace lmom {

enum class SumMethod { direct, closed_form };

struct ExpSumValue {
  cplx value;
  u64 modulus;
  SumMethod method;
};

// S(a,b;c) by direct summation; a, b may be negative (reduced mod c).
// S(a,a;c) is real (x <-> -x pairs conjugate terms); that reality is asserted
// to 1e-9 and a violation throws, since it can only mean a broken evaluator.
ExpSumValue kloosterman(i64 a, i64 b, u64 c);

// KS(f,g,h;r) by direct double summation over unit pairs.
ExpSumValue hyper_kloosterman(i64 f, i64 g, i64 h, u64 r);

// Closed form mu(r/(n,r)) phi(r)/phi(r/(n,r)); real by construction.  The
// direct unit sum is the test oracle.
ExpSumValue ramanujan_sum(u64 r, i64 n);

// Smooth window for the Poisson checks: exp(1 - 1/(1-(u-3/2)^2)) supported on
// (1/2, 5/2), sup = 1 at u = 3/2.
double v_bump(double u);

// vhat(xi) = int V(x) e(-xi x) dx, by 1024-node Gauss-Legendre over the
// support (nodes and V-values cached).  Accurate while the transform is above
// the 1e-12 truncation floor; |xi| > 200 returns 0, far below that floor.
cplx v_hat(double xi);

// The three identities, selected by `lemma`:
//   1:  sum_{e = (fg)bar n mod r, (e,sieve)=1} V(e/scale)
//         = (scale/r) sum_{nu1 | sieve, (nu1,r)=1} mu(nu1)/nu1
//           sum_e e(n e (nu1 f g)bar / r) vhat(scale e/(nu1 r))
//       requires (fgn, r) = 1
//   2:  sum_{(f, sieve*r)=1} e(n e (nu1 f g)bar / r) V(f/scale)
//         = (scale/r) sum_{nu2 | sieve, (nu2,r)=1} mu(nu2)/nu2
//           sum_f S(nu2bar f, n e (nu1 g)bar; r) vhat(scale f/(nu2 r))
//       requires (g nu1, r) = 1
//   3:  sum_{(g, sieve*r)=1} S(nu2bar f, n e (nu1 g)bar; r) V(g/scale)
//         = (scale/r) sum_{nu3 | sieve, (nu3,r)=1} mu(nu3)/nu3
//           sum_g KS(nu2bar f, nu3bar g, nu1bar n e; r) vhat(scale g/(nu3 r))
//       requires (nu1 nu2, r) = 1
// Dual sums are cut once |vhat| stays below 1e-12 of the leading term.
struct PoissonConfig {
  int lemma = 1;
  u64 r = 7;
  u64 f = 1, g = 1, n = 1, e = 1;
  u64 nu1 = 1, nu2 = 1;
  u64 sieve = 1;       // the lemma's lambda (1) or alpha (2, 3)
  double scale = 10.0; // the smooth length E, F, or G of the summed variable
};

// |LHS - RHS| for the selected identity.  Hypothesis violations are rejected
// before any summation.
double poisson_residue_check(const PoissonConfig& cfg);

}  // namespace lmom
