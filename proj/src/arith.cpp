#include "lmom/arith.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace lmom {

static constexpr u64 kSieveLimit = 1'000'000;

const std::vector<u32>& small_primes() {
  static const std::vector<u32> primes = [] {
    std::vector<bool> comp(kSieveLimit + 1, false);
    std::vector<u32> ps;
    for (u64 i = 2; i <= kSieveLimit; ++i) {
      if (comp[i]) continue;
      ps.push_back(static_cast<u32>(i));
      for (u64 j = i * i; j <= kSieveLimit; j += i) comp[j] = true;
    }
    return ps;
  }();
  return primes;
}

// ---- primality of a trial-divided leftover ----------------------------------

static u64 mul_mod(u64 a, u64 b, u64 m) {
  return static_cast<u64>((static_cast<__uint128_t>(a) * b) % m);
}

static u64 pow_mod128(u64 base, u64 exp, u64 mod) {
  u64 r = 1 % mod;
  base %= mod;
  while (exp) {
    if (exp & 1) r = mul_mod(r, base, mod);
    base = mul_mod(base, base, mod);
    exp >>= 1;
  }
  return r;
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // deterministic witness set for all n < 2^64
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    u64 x = pow_mod128(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

Factorization factorize(u64 n) {
  if (n == 0) throw std::domain_error("factorize: n must be positive");
  Factorization f;
  u64 rem = n;
  for (u32 p : small_primes()) {
    if (static_cast<u64>(p) * p > rem) break;
    if (rem % p == 0) {
      int e = 0;
      do {
        rem /= p;
        ++e;
      } while (rem % p == 0);
      f.prime_powers.emplace_back(p, e);
    }
  }
  if (rem > 1) {
    // No factor <= 10^6 left.  A prime leftover is fine; a composite one is
    // outside this artifact's scope (all moduli here are desk scale).
    if (!is_prime(rem))
      throw std::domain_error("factorize: composite cofactor with no factor below 10^6");
    f.prime_powers.emplace_back(rem, 1);
  }
  return f;
}

int mobius(u64 n) {
  Factorization f = factorize(n);
  for (auto& [p, e] : f.prime_powers)
    if (e > 1) return 0;
  return (f.prime_powers.size() % 2 == 0) ? 1 : -1;
}

u64 euler_phi(u64 n) {
  Factorization f = factorize(n);
  u64 phi = n;
  for (auto& [p, e] : f.prime_powers) phi = phi / p * (p - 1);
  return phi;
}

u64 tau3(u64 n) {
  Factorization f = factorize(n);
  u64 t = 1;
  for (auto& [p, e] : f.prime_powers) t *= static_cast<u64>(e + 1) * (e + 2) / 2;
  return t;
}

// ---- modular helpers ----------------------------------------------------------

u64 mod_pow(u64 base, u64 exp, u64 mod) { return pow_mod128(base, exp, mod); }

u64 mod_inverse(u64 a, u64 m) {
  // extended Euclid on (a mod m, m)
  i64 r0 = static_cast<i64>(m), r1 = static_cast<i64>(a % m);
  i64 t0 = 0, t1 = 1;
  while (r1 != 0) {
    i64 q = r0 / r1;
    i64 r2 = r0 - q * r1;
    r0 = r1;
    r1 = r2;
    i64 t2 = t0 - q * t1;
    t0 = t1;
    t1 = t2;
  }
  if (r0 != 1) throw std::domain_error("mod_inverse: arguments not coprime");
  i64 inv = t0 % static_cast<i64>(m);
  if (inv < 0) inv += static_cast<i64>(m);
  return static_cast<u64>(inv);
}

cplx e_frac(i64 num, u64 den) {
  // reduce first so the polar argument stays in [0, 2 pi)
  i64 d = static_cast<i64>(den);
  i64 r = num % d;
  if (r < 0) r += d;
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(d));
}

// ---- shifted divisor sums ------------------------------------------------------

cplx sigma_prime_power(u64 p, int e, const Shift3& a) {
  // direct sum over compositions e = e1 + e2 + e3 of p^{-e1 a1 - e2 a2 - e3 a3}
  const double lp = std::log(static_cast<double>(p));
  cplx sum = 0.0;
  for (int e1 = 0; e1 <= e; ++e1)
    for (int e2 = 0; e2 + e1 <= e; ++e2) {
      int e3 = e - e1 - e2;
      cplx expo = -(a[0] * static_cast<double>(e1) + a[1] * static_cast<double>(e2) +
                    a[2] * static_cast<double>(e3)) *
                  lp;
      sum += std::exp(expo);
    }
  return sum;
}

std::vector<cplx> complete_homogeneous3_series(const std::array<cplx, 3>& x, int rmax) {
  std::vector<cplx> h(static_cast<size_t>(rmax) + 1);
  h[0] = 1.0;
  cplx h2 = 1.0, x2pow = 1.0;
  for (int r = 1; r <= rmax; ++r) {
    x2pow *= x[1];
    h2 = x[0] * h2 + x2pow;
    h[r] = x[2] * h[r - 1] + h2;
  }
  return h;
}

cplx sigma_shifted(u64 m, const Shift3& a) {
  Factorization f = factorize(m);
  cplx v = 1.0;
  for (auto& [p, e] : f.prime_powers) v *= sigma_prime_power(p, e, a);
  return v;
}

std::vector<cplx> sigma_table(u64 n, const Shift3& a) {
  // smallest prime factor sieve, then sigma(m) = sigma(m / p^e) * sigma(p^e).
  // sigma(p, 1) values are cached per prime: for tables of a few million
  // entries the three complex exponentials per prime dominate otherwise.
  std::vector<u32> spf(n + 1, 0);
  for (u64 i = 2; i <= n; ++i) {
    if (spf[i]) continue;
    for (u64 j = i; j <= n; j += i)
      if (!spf[j]) spf[j] = static_cast<u32>(i);
  }
  std::vector<u32> base(n + 1, 1);  // m with all factors of spf(m) removed
  std::vector<u32> expo(n + 1, 0);  // multiplicity of spf(m) in m
  std::vector<cplx> s1(n + 1, cplx(0.0, 0.0));  // sigma(p; a) per prime p
  std::unordered_map<u64, cplx> shigh;          // sigma(p^e; a), e >= 2
  std::vector<cplx> sig(n + 1);
  if (n >= 1) sig[1] = 1.0;
  for (u64 m = 2; m <= n; ++m) {
    u64 p = spf[m];
    u64 q = m / p;
    if (spf[q] == p) {
      expo[m] = expo[q] + 1;
      base[m] = base[q];
    } else {
      expo[m] = 1;
      base[m] = static_cast<u32>(q);
    }
    cplx pp;
    if (expo[m] == 1) {
      if (s1[p] == cplx(0.0, 0.0)) s1[p] = sigma_prime_power(p, 1, a);
      pp = s1[p];
    } else {
      u64 key = p * 64 + expo[m];
      auto it = shigh.find(key);
      if (it == shigh.end()) it = shigh.emplace(key, sigma_prime_power(p, expo[m], a)).first;
      pp = it->second;
    }
    sig[m] = sig[base[m]] * pp;
  }
  return sig;
}

}  // namespace lmom
