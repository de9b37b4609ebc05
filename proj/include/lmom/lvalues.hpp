#pragma once
// ============================================================================
// lvalues: Dirichlet L-values at shifted central points.
//
// Everything is anchored to the completed form
//
//     Lambda(1/2 + s, chi) = (q/pi)^{s/2} Gamma(1/4 + s/2) L(1/2 + s, chi),
//
// which for even primitive chi satisfies
//
//     Lambda(1/2 + s, chi) = eps_chi Lambda(1/2 - s, conj(chi)),
//     eps_chi = tau(chi) / sqrt(q).
//
// L itself is evaluated through Hurwitz zeta rows,
//
//     L(s, chi) = q^{-s} sum_{a=1..q} chi(a) zeta(s, a/q),
//
// an exact finite identity that needs no root-number input, so functional
// equation checks against this path are not circular.
// ============================================================================

#include <complex>

#include "lmom/characters.hpp"
#include "lmom/shifts.hpp"

namespace lmom {

struct CompletedLValue {
  cplx value;         // Lambda(1/2 + s, chi)
  u64 modulus = 1;    // q
  cplx shift_point;   // s
  cplx gamma_factor;  // (q/pi)^{s/2} Gamma(1/4 + s/2)
  cplx raw_l;         // L(1/2 + s, chi)
};

// L(s, chi).  Principal characters go through
//     L(s, chi_0) = zeta(s) prod_{p|q} (1 - p^{-s})
// and the pole at s = 1 is rejected.  Non-principal characters are entire,
// but the Hurwitz rows individually blow up at s = 1, so that point switches
// to the digamma form L(1, chi) = -(1/q) sum_a chi(a) psi(a/q).
cplx l_value(const DirichletCharacter& chi, cplx s);

// eps_chi = tau(chi)/sqrt(q); rejects non-primitive and odd characters.
cplx root_number(const DirichletCharacter& chi);

// Lambda(1/2 + s, chi) with the pieces kept.  chi must be primitive and even.
CompletedLValue completed_lambda(const DirichletCharacter& chi, cplx s);

// prod_j Lambda(1/2 + alpha_j, chi) Lambda(1/2 - beta_j, conj(chi)).
cplx lambda_shifted(const DirichletCharacter& chi, const Shifts& t);

}  // namespace lmom
