#pragma once
// ============================================================================
// arith: exact integer arithmetic and multiplicative functions.
//
// Everything downstream leans on this module: factorization by trial division
// against a fixed prime sieve, the classical multiplicative functions mu, phi,
// tau3, and the shifted ternary divisor sum
//
//     sigma(m; a) = sum_{m = m1 m2 m3} m1^{-a1} m2^{-a2} m3^{-a3},
//
// which is multiplicative with sigma(p^e; a) = h_e(p^{-a1}, p^{-a2}, p^{-a3}),
// the complete homogeneous symmetric polynomial of degree e.
// ============================================================================

#include <array>
#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

namespace lmom {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using cplx = std::complex<double>;

// ---- compensated summation ------------------------------------------------
// Kahan accumulator; complex add/sub are componentwise so the classic scalar
// compensation argument carries over unchanged.
struct KahanSum {
  cplx s{0.0, 0.0};
  cplx c{0.0, 0.0};
  void add(cplx x) {
    cplx y = x - c;
    cplx t = s + y;
    c = (t - s) - y;
    s = t;
  }
  cplx value() const { return s; }
};

// ---- primes and factorization ----------------------------------------------

// All primes below 10^6, built once.
const std::vector<u32>& small_primes();

struct Factorization {
  // (prime, exponent), primes strictly ascending, exponents >= 1
  std::vector<std::pair<u64, int>> prime_powers;
};

// Trial division against the sieve; a leftover cofactor is certified prime by
// deterministic Miller-Rabin.  Throws std::domain_error for n = 0 and for a
// composite leftover with no factor below the sieve bound (out of scope here).
Factorization factorize(u64 n);

bool is_prime(u64 n);

int mobius(u64 n);
u64 euler_phi(u64 n);

// number of ordered triples (a,b,c) with abc = n; tau3(p^e) = (e+1)(e+2)/2
u64 tau3(u64 n);

// ---- modular helpers --------------------------------------------------------

u64 mod_pow(u64 base, u64 exp, u64 mod);
// inverse of a mod m via extended Euclid; throws if gcd(a, m) != 1
u64 mod_inverse(u64 a, u64 m);

// e(num/den) = exp(2 pi i num/den)
cplx e_frac(i64 num, u64 den);

// ---- shifted ternary divisor sums -------------------------------------------

using Shift3 = std::array<cplx, 3>;

// sigma(p^e; a) by direct summation over exponent compositions e = e1+e2+e3.
cplx sigma_prime_power(u64 p, int e, const Shift3& a);

// h_r(x1,x2,x3) for r = 0..rmax in one recurrence sweep:
//   h_r(x1,x2)     = x1 h_{r-1}(x1,x2) + x2^r
//   h_r(x1,x2,x3)  = x3 h_{r-1}(x1,x2,x3) + h_r(x1,x2)
// With x_i = p^{-a_i} this lists sigma(p^r; a) for all r at O(rmax) cost.
std::vector<cplx> complete_homogeneous3_series(const std::array<cplx, 3>& x, int rmax);

cplx sigma_shifted(u64 m, const Shift3& a);

// sigma(m; a) for every 1 <= m <= n via a smallest-prime-factor sieve.
std::vector<cplx> sigma_table(u64 n, const Shift3& a);

}  // namespace lmom
