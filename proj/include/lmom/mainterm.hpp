#pragma once
// ============================================================================
// mainterm: the conjectural main term of the sixth moment.
//
// Local factors at s, shifts (alpha, beta):
//
//     B_p(s) = sum_{r>=0} sigma(p^r; alpha) sigma(p^r; -beta) p^{-2rs}
//     Z_p(s) = prod_{i,j} zeta_p(2s + alpha_i - beta_j),
//              zeta_p(x) = (1 - p^{-x})^{-1}
//     A(s)   = prod_p B_p(s) Z_p(s)^{-1}        (converges for Re s > 1/4)
//
// assembled at the central point into
//
//     Q(q)   = (q/pi)^delta G(1/2) A(1/2) Z(1/2) / B_q(1/2),
//              Z(1/2) = prod_{i,j} zeta(1 + alpha_i - beta_j),
//              B_q    = prod_{p|q} B_p,
//
// symmetrized over the twenty S6/(S3 x S3) exchanges of the shift six-tuple
// into Qtilde, and summed against the family weights:
//
//     predicted(Q) = sum_q Psi(q/Q) phiflat(q) Qtilde(q),
//
// phiflat(q) = number of primitive even characters mod q.  The diagonal sum
// D(Q) (the (m,q)=1 diagonal of the coefficient expansion, cut off by
// W(m,m;q)) matches H(0) sum_q Psi(q/Q) phiflat(q) Q(q) up to the
// off-diagonal remainder.
// ============================================================================

#include <functional>
#include <vector>

#include "lmom/arith.hpp"
#include "lmom/shifts.hpp"

namespace lmom {

struct EulerProductValue {
  cplx value;
  u64 prime_cut;      // product taken over p <= prime_cut
  double tail_bound;  // bound on the relative change from all omitted primes
};

// B_p(s) truncated at r <= rmax (rmax >= 10), stopping early once the terms
// are below 1e-16 of the partial sum.  Requires enough decay to converge
// comfortably (Re 2s - 2 max|shift| >= 0.55) and a geometric tail estimate
// below 1e-14 of the sum at the stopping point; both failures throw.
cplx bp_local(u64 p, cplx s, const Shifts& t, int rmax);

// Z_p(s); a vanishing exponent 2s + alpha_i - beta_j (pole of zeta_p) throws.
cplx zeta_local(u64 p, cplx s, const Shifts& t);

// prod_{p <= prime_cut} B_p Z_p^{-1}.  The log of the p-factor is O(p^{-2})
// at central shifts, so tail_bound = 10/prime_cut covers what is left.
EulerProductValue a_product(cplx s, const Shifts& t, u64 prime_cut);

// a_3 = prod_p (1 - 1/p)^4 (1 + 4/p + 1/p^2), the zero-shift value A(1/2).
// Requires prime_cut >= 100.
EulerProductValue a3_constant(u64 prime_cut);

// Q(q) above.  The per-shift factors {G(1/2), A(1/2), Z(1/2)} are cached, so
// sweeping q is cheap after the first call.  Shift gaps |alpha_i - beta_j|
// below 1e-4 would put Z against its pole and are rejected.
cplx q_main(u64 q, const Shifts& t);

// The twenty exchanged configurations: every 3-subset S of the combined
// six-tuple (alpha_1..alpha_3, beta_1..beta_3) becomes the alpha side (S in
// ascending slot order, complement likewise), enumerated in ascending
// lexicographic order of S.  Subsets are returned even if degenerate; the
// q_tilde sum is what rejects those.
std::vector<Shifts> coset_configurations(const Shifts& t);

// Qtilde(q) = sum over coset_configurations of Q(q; exchanged shifts).
// A configuration whose gap structure degenerates names the offending coset
// in the thrown error.
//
// Conditioning: each exchanged term carries prod_{i,j} zeta(1 + gap), so the
// terms grow like 1/prod gaps while the symmetrized sum stays moderate.  With
// the six shifts spaced ~0.1 apart the cancellation costs a few digits; at
// spacings ~0.005 the individual terms reach 1e18 and the double-precision
// sum is order-of-magnitude only.  Summation order is fixed (ascending
// lexicographic cosets, compensated), so results are reproducible either way.
cplx q_tilde(u64 q, const Shifts& t);

// Smooth bump supported on (1, 2), sup = 1 at x = 3/2:
// exp(1 - 1/(1 - (2x-3)^2)).
double psi_bump(double x);

// D(Q) = sum_q Psi(q/Q) phiflat(q) sum_{m <= mmax, (m,q)=1}
//            sigma(m; alpha) sigma(m; -beta) m^{-1} W(m, m; q).
// The m-tail beyond mmax is estimated from the next dyadic block; if
// tail_estimate is non-null it receives that bound.  An mmax that leaves the
// cutoff still in its bulk is rejected, with the estimate in the message.
cplx diagonal_term(u64 big_q, const Shifts& t,
                   const std::function<double(double)>& psi, u64 mmax,
                   double* tail_estimate = nullptr);

// sum_q Psi(q/Q) phiflat(q) Qtilde(q); q runs over (Q, 2Q).
cplx predicted_moment(u64 big_q, const Shifts& t,
                      const std::function<double(double)>& psi);

// One modulus worth of the zero-shift leading asymptotic:
//     42 a_3 prod_{p|q} [(1-1/p)^5 / (1+4/p+1/p^2)] phiflat(q) (log q)^9 / 9!.
double corollary_density(u64 q);

// Leading asymptotic of the sharp-cutoff zero-shift moment: the density
// summed over q <= Q.
double corollary_leading(u64 big_q);

}  // namespace lmom
