#include "lmom/mainterm.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "lmom/characters.hpp"
#include "lmom/weights.hpp"

namespace lmom {
namespace {

constexpr int kBpDepth = 200;     // r cutoff for B_p inside products over p
constexpr u64 kACut = 10000;      // prime cut for the cached A(1/2)
constexpr double kSeparation = 1e-4;

// Convergence guard shared by bp_local and a_product: the r-th term of B_p is
// O(r^4 p^{-r(2 Re s - 2 max|shift|)}), so keep the exponent off the floor.
void require_convergent(cplx s, const Shifts& t, const char* who) {
  if (2.0 * s.real() - 2.0 * t.max_magnitude() < 0.55)
    throw std::domain_error(std::string(who) +
                            ": series too close to its divergence abscissa");
}

// Exchanged shift configurations: subset (i < j < k) of the combined
// six-tuple becomes the alpha side.  Slot names a1..a3, b1..b3 label error
// messages.
template <typename F>
void for_each_coset(const Shifts& t, F&& visit) {
  const std::array<cplx, 6> c = {t.alpha[0], t.alpha[1], t.alpha[2],
                                 t.beta[0],  t.beta[1],  t.beta[2]};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 5; ++j)
      for (int k = j + 1; k < 6; ++k) {
        Shifts s;
        s.alpha = {c[i], c[j], c[k]};
        int pos = 0;
        for (int m = 0; m < 6; ++m)
          if (m != i && m != j && m != k) s.beta[pos++] = c[m];
        visit(s, std::array<int, 3>{i, j, k});
      }
}

std::string slot_name(int idx) {
  return (idx < 3 ? "a" : "b") + std::to_string(idx % 3 + 1);
}

// (G(1/2), A(1/2), Z(1/2)) depend only on the shifts; q sweeps reuse them.
struct GlobalFactors {
  cplx g_half, a_half, z_half;
};

using ShiftKey = std::array<double, 12>;

ShiftKey key_of(const Shifts& t) {
  ShiftKey k;
  for (int j = 0; j < 3; ++j) {
    k[4 * j] = t.alpha[j].real();
    k[4 * j + 1] = t.alpha[j].imag();
    k[4 * j + 2] = t.beta[j].real();
    k[4 * j + 3] = t.beta[j].imag();
  }
  return k;
}

GlobalFactors global_factors(const Shifts& t) {
  static std::map<ShiftKey, GlobalFactors> cache;
  static std::mutex guard;
  const ShiftKey key = key_of(t);
  {
    std::lock_guard<std::mutex> lock(guard);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  GlobalFactors gf;
  gf.g_half = g_factor(0.5, t);
  gf.a_half = a_product(0.5, t, kACut).value;
  gf.z_half = 1.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      gf.z_half *= riemann_zeta(1.0 + t.alpha[i] - t.beta[j]);
  std::lock_guard<std::mutex> lock(guard);
  cache.emplace(key, gf);
  return gf;
}

}  // namespace

cplx bp_local(u64 p, cplx s, const Shifts& t, int rmax) {
  if (p < 2 || !is_prime(p)) throw std::invalid_argument("bp_local: p must be prime");
  if (rmax < 10) throw std::invalid_argument("bp_local: rmax must be >= 10");
  require_convergent(s, t, "bp_local");

  const double lp = std::log(static_cast<double>(p));
  Shift3 xa, xb;
  for (int j = 0; j < 3; ++j) {
    xa[j] = std::exp(-t.alpha[j] * lp);  // p^{-alpha_j}
    xb[j] = std::exp(t.beta[j] * lp);    // p^{-(-beta_j)}
  }
  const std::vector<cplx> ha = complete_homogeneous3_series(xa, rmax);
  const std::vector<cplx> hb = complete_homogeneous3_series(xb, rmax);
  const cplx step = std::exp(-2.0 * s * lp);

  KahanSum sum;
  cplx pw = 1.0;
  double last = 0.0, prev = 0.0;
  bool settled = false;
  for (int r = 0; r <= rmax; ++r) {
    cplx term = ha[r] * hb[r] * pw;
    sum.add(term);
    prev = last;
    last = std::abs(term);
    if (r >= 2 && last <= 1e-16 * std::abs(sum.value())) {
      settled = true;
      break;
    }
    pw *= step;
  }
  if (!settled) {
    double rho = prev > 0.0 ? last / prev : 0.0;
    if (rho >= 0.95)
      throw std::domain_error("bp_local: terms are not decaying geometrically");
    double tail = last * rho / (1.0 - rho);
    if (tail > 1e-14 * (1.0 + std::abs(sum.value())))
      throw std::invalid_argument("bp_local: rmax leaves a visible tail");
  }
  return sum.value();
}

cplx zeta_local(u64 p, cplx s, const Shifts& t) {
  if (p < 2 || !is_prime(p)) throw std::invalid_argument("zeta_local: p must be prime");
  const double lp = std::log(static_cast<double>(p));
  cplx out = 1.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      cplx den = 1.0 - std::exp(-(2.0 * s + t.alpha[i] - t.beta[j]) * lp);
      if (std::abs(den) < 1e-8)
        throw std::domain_error("zeta_local: exponent at a pole of zeta_p");
      out /= den;
    }
  return out;
}

EulerProductValue a_product(cplx s, const Shifts& t, u64 prime_cut) {
  require_convergent(s, t, "a_product");
  const std::vector<u32>& primes = small_primes();
  if (prime_cut < 2 || prime_cut > primes.back())
    throw std::invalid_argument("a_product: prime_cut outside the sieve range");

  EulerProductValue out{1.0, prime_cut, 10.0 / static_cast<double>(prime_cut)};
  for (u32 p : primes) {
    if (p > prime_cut) break;
    out.value *= bp_local(p, s, t, kBpDepth) / zeta_local(p, s, t);
  }
  return out;
}

EulerProductValue a3_constant(u64 prime_cut) {
  const std::vector<u32>& primes = small_primes();
  if (prime_cut < 100 || prime_cut > primes.back())
    throw std::invalid_argument("a3_constant: prime_cut outside [100, sieve range]");

  // B_p Z_p^{-1} at the central point with zero shifts collapses to
  // (1 - 1/p)^4 (1 + 4/p + 1/p^2) = 1 - 9/p^2 + O(1/p^3).
  EulerProductValue out{1.0, prime_cut, 10.0 / static_cast<double>(prime_cut)};
  for (u32 p : primes) {
    if (p > prime_cut) break;
    const double x = 1.0 / p;
    const double f = 1.0 - x;
    out.value *= f * f * f * f * (1.0 + 4.0 * x + x * x);
  }
  return out;
}

cplx q_main(u64 q, const Shifts& t) {
  if (q == 0) throw std::invalid_argument("q_main: q must be positive");
  if (!t.pairwise_distinct(kSeparation))
    throw std::invalid_argument("q_main: shift gap below the separation floor");

  const GlobalFactors gf = global_factors(t);
  cplx bq = 1.0;
  for (const auto& [p, e] : factorize(q).prime_powers)
    bq *= bp_local(p, 0.5, t, kBpDepth);
  const cplx pref =
      std::exp(t.delta() * std::log(static_cast<double>(q) / std::numbers::pi));
  return pref * gf.g_half * gf.a_half * gf.z_half / bq;
}

std::vector<Shifts> coset_configurations(const Shifts& t) {
  std::vector<Shifts> out;
  out.reserve(20);
  for_each_coset(t, [&](const Shifts& s, const std::array<int, 3>&) {
    out.push_back(s);
  });
  return out;
}

cplx q_tilde(u64 q, const Shifts& t) {
  KahanSum acc;
  for_each_coset(t, [&](const Shifts& s, const std::array<int, 3>& subset) {
    if (!s.pairwise_distinct(kSeparation))
      throw std::invalid_argument(
          "q_tilde: exchanged configuration {" + slot_name(subset[0]) + "," +
          slot_name(subset[1]) + "," + slot_name(subset[2]) +
          "} has a shift gap below the separation floor");
    acc.add(q_main(q, s));
  });
  return acc.value();
}

double psi_bump(double x) {
  const double u = 2.0 * x - 3.0;
  if (!(std::abs(u) < 1.0)) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - u * u));
}

cplx diagonal_term(u64 big_q, const Shifts& t,
                   const std::function<double(double)>& psi, u64 mmax,
                   double* tail_estimate) {
  if (big_q == 0) throw std::invalid_argument("diagonal_term: Q must be positive");
  if (mmax < 16) throw std::invalid_argument("diagonal_term: mmax too small");

  if (tail_estimate) *tail_estimate = 0.0;
  std::vector<u64> pf(2 * big_q, 0);
  bool any = false;
  for (u64 q = big_q + 1; q < 2 * big_q; ++q) {
    if (psi(static_cast<double>(q) / static_cast<double>(big_q)) == 0.0) continue;
    pf[q] = count_primitive_even(q);
    any = any || pf[q] > 0;
  }
  if (!any) return 0.0;

  const double pi3 = std::pow(std::numbers::pi, 3);
  const double q_hi = static_cast<double>(2 * big_q - 1);
  const double x_at_mmax = pi3 * static_cast<double>(mmax) * static_cast<double>(mmax) /
                           (q_hi * q_hi * q_hi);
  if (x_at_mmax < 200.0) {
    u64 needed = static_cast<u64>(std::ceil(std::sqrt(200.0 / pi3) * q_hi * std::sqrt(q_hi)));
    throw std::invalid_argument(
        "diagonal_term: mmax " + std::to_string(mmax) +
        " leaves the cutoff in its bulk at q = " + std::to_string(2 * big_q - 1) +
        "; need roughly " + std::to_string(needed));
  }

  Shift3 neg_beta;
  for (int j = 0; j < 3; ++j) neg_beta[j] = -t.beta[j];
  const std::vector<cplx> sa = sigma_table(2 * mmax, t.alpha);
  const std::vector<cplx> sb = sigma_table(2 * mmax, neg_beta);

  // One cutoff interpolation covers every (m, q): X = m^2 pi^3 / q^3 ranges
  // from the (1, 2Q-1) corner up to the dead zone past X ~ 5000.
  const double x_min = 0.9 * pi3 / (q_hi * q_hi * q_hi);
  const double x_max =
      std::min(5000.0, 1.1 * pi3 * 4.0 * static_cast<double>(mmax) *
                           static_cast<double>(mmax) /
                           std::pow(static_cast<double>(big_q + 1), 3));
  const WeightTable table(t, x_min, std::max(x_max, 8.0));

  KahanSum outer;
  double tail_acc = 0.0;
  for (u64 q = big_q + 1; q < 2 * big_q; ++q) {
    if (pf[q] == 0) continue;
    const double w =
        psi(static_cast<double>(q) / static_cast<double>(big_q)) *
        static_cast<double>(pf[q]);
    const double qd = static_cast<double>(q);
    KahanSum inner;
    double block = 0.0;  // first omitted dyadic block, in absolute value
    for (u64 m = 1; m <= 2 * mmax; ++m) {
      if (std::gcd(m, q) != 1) continue;
      const double md = static_cast<double>(m);
      const cplx wt = table.weight(md, md, qd);
      if (m <= mmax)
        inner.add(sa[m] * sb[m] * (wt / md));
      else
        block += std::abs(sa[m] * sb[m]) * std::abs(wt) / md;
    }
    outer.add(w * inner.value());
    // the cutoff decays superexponentially in X^{1/3}, so later blocks are
    // dominated by the first; doubling it covers the whole tail
    tail_acc += std::abs(w) * 2.0 * block;
  }
  if (tail_estimate) *tail_estimate = tail_acc;
  return outer.value();
}

cplx predicted_moment(u64 big_q, const Shifts& t,
                      const std::function<double(double)>& psi) {
  if (big_q == 0) throw std::invalid_argument("predicted_moment: Q must be positive");
  KahanSum acc;
  for (u64 q = big_q + 1; q < 2 * big_q; ++q) {
    const double w = psi(static_cast<double>(q) / static_cast<double>(big_q));
    if (w == 0.0) continue;
    const u64 pf = count_primitive_even(q);
    if (pf == 0) continue;
    acc.add((w * static_cast<double>(pf)) * q_tilde(q, t));
  }
  return acc.value();
}

double corollary_density(u64 q) {
  if (q == 0) throw std::invalid_argument("corollary_density: q must be positive");
  static const double a3 = a3_constant(kACut).value.real();
  constexpr double kFact9 = 362880.0;
  const u64 pf = count_primitive_even(q);
  if (pf == 0) return 0.0;
  double local = 1.0;
  for (const auto& [p, e] : factorize(q).prime_powers) {
    const double x = 1.0 / static_cast<double>(p);
    const double f = 1.0 - x;
    local *= f * f * f * f * f / (1.0 + 4.0 * x + x * x);
  }
  const double lq = std::log(static_cast<double>(q));
  return 42.0 * a3 * local * static_cast<double>(pf) * std::pow(lq, 9) / kFact9;
}

double corollary_leading(u64 big_q) {
  if (big_q == 0) throw std::invalid_argument("corollary_leading: Q must be positive");
  KahanSum acc;
  for (u64 q = 2; q <= big_q; ++q) acc.add(corollary_density(q));
  return acc.value().real();
}

}  // namespace lmom
