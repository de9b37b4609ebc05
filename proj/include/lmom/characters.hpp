#pragma once
// Dirichlet characters mod q built on the CRT structure of (Z/qZ)^*: one
// generator per odd prime-power component (smallest primitive root of p,
// lifted to p^e), and the pair {-1, 5} for the 2-part when 8 | q. Character
// values are exact roots of unity carried as integer phases over a common
// denominator, so multiplicativity and conductor tests are exact.

#include <utility>
#include <vector>

#include "lmom/arith.hpp"

namespace lmom {

struct DirichletCharacter {
  u64 modulus = 1;
  std::vector<int> component_exponents;  // one per group generator
  std::vector<u64> component_orders;     // generator orders, same layout
  u64 conductor = 1;
  bool even = true;
  u64 phase_den = 1;           // lcm of the generator orders
  std::vector<i64> phase_num;  // chi(a) = e(phase_num[a]/phase_den); -1 on non-units
  std::vector<cplx> value_table;  // length q, 0 on non-units

  cplx value(u64 n) const { return value_table[n % modulus]; }
  bool is_primitive() const { return conductor == modulus; }
  bool is_principal() const { return conductor == 1; }
};

// All phi(q) characters mod q in a deterministic order: mixed radix over the
// generator exponents, 2-part generators first, then odd primes ascending.
std::vector<DirichletCharacter> enumerate_characters(u64 q);

// Least d | q such that chi is induced by a character mod d (stored at
// construction by testing chi(a) = 1 on all a = 1 mod d coprime to q).
u64 conductor(const DirichletCharacter& chi);

DirichletCharacter conjugate_character(const DirichletCharacter& chi);

// Number of primitive even characters mod q, by the divisor sum
//   (1/2) [ sum_{dr=q} mu(d) phi(r) + sum_{dr=q, r|2} mu(d) phi(r) ].
u64 count_primitive_even(u64 q);

struct GaussSumResult {
  cplx value;          // sum_{a mod q} chi(a) e(a/q)
  double modulus_root; // sqrt(q)
};
GaussSumResult gauss_sum(const DirichletCharacter& chi);

// Both sides of the orthogonality relation for primitive even characters,
//   sum♭_chi chi(m) conj(chi(n)) = (1/2) sum_{q=dr} mu(d) phi(r) [r|m+n] + [r|m-n],
// returned as (character-sum side, divisor-sum side). Requires (mn, q) = 1.
std::pair<cplx, cplx> orthogonality_sides(u64 q, u64 m, u64 n);

}  // namespace lmom
