// Acceptance gate: one self-contained check per shipped criterion, each
// printing a single line
//
//     criterion <tag>: PASS|FAIL (measured ...)
//
// and the process exits with the number of failed criteria among those run.
// Checks that double precision cannot satisfy are implemented exactly as
// stated and allowed to fail; their lines carry the measured numbers plus
// the nearest achievable diagnostic, so a red line is evidence, not a crash.
//
// Usage: acceptance [--criterion <tag>]   tags: 1..10, 11a, 11b, 11c, 12

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "lmom/characters.hpp"
#include "lmom/expsums.hpp"
#include "lmom/lvalues.hpp"
#include "lmom/mainterm.hpp"
#include "lmom/moments.hpp"
#include "lmom/weights.hpp"

using namespace lmom;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

Shifts pinned_shifts() {  // the 0.02-scale set every shifted criterion pins
  Shifts t;
  t.alpha = {cplx(0.02), cplx(0.01), cplx(-0.015)};
  t.beta = {cplx(-0.01), cplx(0.005), cplx(0.025)};
  return t;
}

std::vector<DirichletCharacter> family(u64 q) {
  std::vector<DirichletCharacter> out;
  for (const DirichletCharacter& chi : enumerate_characters(q))
    if (chi.is_primitive() && chi.even) out.push_back(chi);
  return out;
}

// 1. orthogonality: character side vs divisor side, q <= 60, m, n <= 40
Outcome crit_1() {
  double worst = 0.0;
  u64 pairs = 0;
  for (u64 q = 1; q <= 60; ++q)
    for (u64 m = 1; m <= 40; ++m)
      for (u64 n = 1; n <= 40; ++n) {
        if (std::gcd(m * n, q) != 1) continue;
        const auto [lhs, rhs] = orthogonality_sides(q, m, n);
        worst = std::max(worst, std::abs(lhs - rhs));
        ++pairs;
      }
  return {worst <= 1e-9,
          fmt("worst |character side - divisor side| = %.3e over %llu admissible (q,m,n), "
              "target <= 1e-9",
              worst, (unsigned long long)pairs)};
}

// 2. AFE identity, residual relative to |H(0) Lambda| as stated
Outcome crit_2() {
  const Shifts t = pinned_shifts();
  Shifts ts;
  ts.alpha = t.beta;
  ts.beta = t.alpha;
  const cplx h0 = h_poly(0.0, t);
  double worst_stated = 0.0;   // residual / |H(0) Lambda|
  double worst_coeff = 0.0;    // residual / max |Lambda_0|, the achievable scale
  bool tails_ok = true;
  int characters = 0;
  for (u64 q : {5ull, 7ull, 11ull, 13ull}) {
    const u64 need = afe_required_mn(q, t, 1e-8);
    for (const DirichletCharacter& chi : family(q)) {
      double tail_ab = 0.0, tail_ba = 0.0;
      const cplx l0ab = afe_lambda0(chi, t, need, &tail_ab);
      const cplx l0ba = afe_lambda0(chi, ts, need, &tail_ba);
      const cplx lhs = h0 * lambda_shifted(chi, t);
      const double resid = std::abs(lhs - (l0ab + l0ba));
      worst_stated = std::max(worst_stated, resid / std::abs(lhs));
      worst_coeff =
          std::max(worst_coeff, resid / std::max(std::abs(l0ab), std::abs(l0ba)));
      tails_ok = tails_ok && resid <= tail_ab + tail_ba;
      ++characters;
    }
  }
  return {worst_stated <= 1e-6,
          fmt("worst residual/|H(0)Lambda| = %.3e over %d characters, target <= 1e-6; "
              "|H(0)| = %.2e forces ~37-digit cancellation between the Lambda_0 sums; "
              "at the coefficient-sum scale the identity closes to %.3e%s",
              worst_stated, characters, std::abs(h0), worst_coeff,
              tails_ok ? ", inside every reported truncation tail" : "")};
}

// 3. completed functional equation Lambda(1/2+s) = eps Lambda(1/2-s, conj)
Outcome crit_3() {
  const cplx points[2] = {cplx(0.1, 0.0), cplx(0.05, 0.2)};
  double worst = 0.0;
  int characters = 0;
  for (u64 q = 1; q <= 100; ++q)
    for (const DirichletCharacter& chi : family(q)) {
      const DirichletCharacter bar = conjugate_character(chi);
      const cplx eps = root_number(chi);
      for (const cplx& s : points) {
        const cplx lhs = completed_lambda(chi, s).value;
        const cplx rhs = eps * completed_lambda(bar, -s).value;
        worst = std::max(worst, std::abs(lhs - rhs));
      }
      ++characters;
    }
  return {worst <= 1e-8, fmt("worst |Lambda(1/2+s) - eps Lambda(1/2-s, conj chi)| = %.3e "
                             "over %d characters x 2 points, target <= 1e-8",
                             worst, characters)};
}

// 4. Gauss sum modulus |tau(chi)|^2 = q for all primitive chi, q <= 200
Outcome crit_4() {
  double worst = 0.0;
  int characters = 0;
  for (u64 q = 1; q <= 200; ++q)
    for (const DirichletCharacter& chi : enumerate_characters(q)) {
      if (!chi.is_primitive()) continue;
      const cplx tau = gauss_sum(chi).value;
      worst = std::max(worst, std::abs(std::norm(tau) - static_cast<double>(q)));
      ++characters;
    }
  return {worst <= 1e-8, fmt("worst | |tau|^2 - q | = %.3e over %d primitive characters, "
                             "target <= 1e-8",
                             worst, characters)};
}

// 5. Weil bound over every pair: S(a,b;p) = S(1,ab;p) collapses each prime
//    to one table of p magnitudes
Outcome crit_5() {
  double worst = -1e300;  // max |S| - 2 sqrt p
  u64 pairs = 0;
  for (u32 p : small_primes()) {
    if (p > 500) break;
    std::vector<double> mag(p);
    for (u64 m = 0; m < p; ++m) mag[m] = std::abs(kloosterman(1, static_cast<i64>(m), p).value);
    const double bound = 2.0 * std::sqrt(static_cast<double>(p));
    for (u64 a = 1; a < p; ++a)
      for (u64 b = 1; b < p; ++b) {
        worst = std::max(worst, mag[a * b % p] - bound);
        ++pairs;
      }
  }
  return {worst <= 1e-9, fmt("max |S(a,b;p)| - 2 sqrt(p) = %.3e over %llu pairs, p <= 500; "
                             "zero violations required",
                             worst, (unsigned long long)pairs)};
}

// 6. Deligne bound |KS(f,g,h;p)| <= 3p, 20 seeded triples per prime
Outcome crit_6() {
  std::mt19937_64 rng(611);
  double worst = 0.0;  // max |KS| / 3p
  for (u32 p : small_primes()) {
    if (p > 200) break;
    std::uniform_int_distribution<u64> unit(1, p - 1);
    for (int trial = 0; trial < 20; ++trial) {
      const i64 f = static_cast<i64>(unit(rng)), g = static_cast<i64>(unit(rng)),
                h = static_cast<i64>(unit(rng));
      worst = std::max(worst, std::abs(hyper_kloosterman(f, g, h, p).value) / (3.0 * p));
    }
  }
  return {worst <= 1.0 + 1e-12,
          fmt("max |KS(f,g,h;p)| / 3p = %.4f over 20 triples per p <= 200, target <= 1", worst)};
}

// 7. Ramanujan closed form vs direct unit sum, exhaustive
Outcome crit_7() {
  double worst = 0.0;
  for (u64 r = 1; r <= 300; ++r) {
    std::vector<u64> units;
    if (r == 1) units.push_back(0);
    for (u64 a = 1; a < r; ++a)
      if (std::gcd(a, r) == 1) units.push_back(a);
    for (i64 n = -300; n <= 300; ++n) {
      KahanSum direct;
      for (u64 a : units) direct.add(e_frac(static_cast<i64>(a) * n, r));
      worst = std::max(worst, std::abs(ramanujan_sum(r, n).value - direct.value()));
    }
  }
  return {worst <= 1e-9,
          fmt("worst |closed form - direct| = %.3e over r <= 300, |n| <= 300, target <= 1e-9",
              worst)};
}

// 8. Poisson lemma identities on randomized admissible parameter sets
Outcome crit_8() {
  std::mt19937_64 rng(812);
  const u64 moduli[] = {3, 5, 7, 9, 11, 13};
  double worst = 0.0;
  for (int lemma = 1; lemma <= 3; ++lemma)
    for (int trial = 0; trial < 30; ++trial) {
      PoissonConfig cfg;
      cfg.lemma = lemma;
      cfg.r = moduli[rng() % 6];
      auto coprime = [&](u64 r) {
        u64 v;
        do v = 1 + rng() % (3 * r);
        while (std::gcd(v, r) != 1);
        return v;
      };
      cfg.f = coprime(cfg.r);
      cfg.g = coprime(cfg.r);
      cfg.n = lemma == 1 ? coprime(cfg.r) : 1 + rng() % 12;
      cfg.e = 1 + rng() % 6;
      cfg.nu1 = lemma == 1 ? 1 + rng() % 8 : coprime(cfg.r);
      cfg.nu2 = lemma == 3 ? coprime(cfg.r) : 1 + rng() % 8;
      cfg.sieve = lemma == 1 ? 1 + rng() % 10 : 1;
      cfg.scale = 6.0 + (rng() % 800) / 100.0;
      worst = std::max(worst, poisson_residue_check(cfg));
    }
  return {worst <= 1e-6,
          fmt("worst identity residual = %.3e over 30 draws x 3 lemmas, target <= 1e-6", worst)};
}

// 9. rescaling identity W(m,n;uQ) = Q^delta W(m Q^{-3/2}, n Q^{-3/2}; u)
Outcome crit_9() {
  const Shifts t = pinned_shifts();
  const double ms[5] = {1, 3, 7, 12, 25};
  const double us[3] = {0.8, 1.5, 3.0};
  double worst = 0.0;
  for (double big_q : {40.0, 80.0}) {
    const double root = std::pow(big_q, 1.5);
    const cplx scale = std::exp(t.delta() * std::log(big_q));
    for (double m : ms)
      for (double n : ms)
        for (double u : us) {
          const cplx lhs = w_weight(m, n, u * big_q, t).value;
          const cplx rhs = scale * w_weight(m / root, n / root, u, t).value;
          worst = std::max(worst, std::abs(lhs - rhs));
        }
  }
  return {worst <= 1e-8,
          fmt("worst |W(m,n;uQ) - Q^delta W(m/Q^1.5, n/Q^1.5; u)| = %.3e on the 5x5x3 grid "
              "at Q in {40,80}, target <= 1e-8",
              worst)};
}

// 10. diagonal two-method agreement: direct D vs the s=0 residue evaluation
Outcome crit_10() {
  const Shifts t = pinned_shifts();
  const cplx h0 = h_poly(0.0, t);
  double gaps[2] = {0.0, 0.0};
  double mags[2][2] = {{0, 0}, {0, 0}};
  const u64 qs[2] = {40, 80};
  const u64 mmaxs[2] = {6000, 17000};
  for (int i = 0; i < 2; ++i) {
    const cplx direct = diagonal_term(qs[i], t, psi_bump, mmaxs[i]);
    KahanSum residue;
    for (u64 q = qs[i] + 1; q < 2 * qs[i]; ++q) {
      const u64 pf = count_primitive_even(q);
      if (pf == 0) continue;
      residue.add(psi_bump(static_cast<double>(q) / qs[i]) * static_cast<double>(pf) *
                  q_main(q, t));
    }
    const cplx res = h0 * residue.value();
    gaps[i] = std::abs(direct - res) / std::abs(res);
    mags[i][0] = std::abs(direct);
    mags[i][1] = std::abs(res);
  }
  const bool pass = gaps[0] <= 0.05 && gaps[1] < gaps[0];
  return {pass,
          fmt("relative gap %.3e at Q=40, %.3e at Q=80, target <= 0.05 and decreasing; "
              "|D| = %.2e vs |H(0) sum Psi phiflat Q| = %.2e: H(0) = %.2e pushes the s=0 "
              "residue far below the contour remainder at these shifts",
              gaps[0], gaps[1], mags[0][0], mags[0][1], h0.real())};
}

// 11a. zero-shift empirical moment is real and nonnegative row by row
Outcome crit_11a() {
  MomentConfig cfg;
  cfg.big_q = 400;
  cfg.weight = CutoffMode::sharp;
  cfg.thread_hint = 8;
  const MomentReport rep = empirical_moment(cfg);
  double worst_im = 0.0, worst_neg = 0.0;
  for (const PerModulusRow& row : rep.per_q) {
    worst_im = std::max(worst_im, std::abs(row.empirical.imag()));
    worst_neg = std::min(worst_neg, row.empirical.real());
  }
  return {worst_im == 0.0 && worst_neg >= 0.0,
          fmt("all %zu rows real-nonnegative up to Q=400 (max |Im| = %.1e, min Re = %.3e), "
              "total %.6f in %.1fs",
              rep.per_q.size(), worst_im, worst_neg, rep.empirical_total.real(),
              rep.runtime_seconds)};
}

// 11b. empirical / corollary_leading inside (0.1, 10), monotone over Q
Outcome crit_11b() {
  double ratios[3] = {0, 0, 0};
  const u64 qs[3] = {100, 200, 400};
  double seconds = 0.0;
  for (int i = 0; i < 3; ++i) {
    MomentConfig cfg;
    cfg.big_q = qs[i];
    cfg.weight = CutoffMode::sharp;
    cfg.thread_hint = 8;
    const MomentReport rep = moment_report(cfg);
    ratios[i] = rep.empirical_total.real() / rep.predicted_total.real();
    seconds += rep.runtime_seconds;
  }
  const bool band = ratios[0] > 0.1 && ratios[0] < 10.0 && ratios[1] > 0.1 && ratios[1] < 10.0 &&
                    ratios[2] > 0.1 && ratios[2] < 10.0;
  const bool monotone = (ratios[0] < ratios[1] && ratios[1] < ratios[2]) ||
                        (ratios[0] > ratios[1] && ratios[1] > ratios[2]);
  return {band && monotone,
          fmt("ratio empirical/leading = %.4f, %.4f, %.4f at Q = 100, 200, 400; band (0.1, 10) "
              "%s, monotone %s; %.1fs total",
              ratios[0], ratios[1], ratios[2], band ? "holds" : "VIOLATED",
              monotone ? "holds" : "VIOLATED", seconds)};
}

// 11c. hurwitz vs afe empirical totals at Q = 50 (sharp: the q <= 50 family),
//      truncation cap raised to the fitted requirement as the config contract
//      demands
Outcome crit_11c() {
  const Shifts t = pinned_shifts();
  MomentConfig cfg;
  cfg.big_q = 50;
  cfg.shifts = t;
  cfg.weight = CutoffMode::sharp;
  cfg.method = MomentMethod::both;
  cfg.afe_truncation = 6'000'000;
  cfg.thread_hint = 8;
  try {
    const MomentReport rep = empirical_moment(cfg);
    const double gap = std::abs(rep.empirical_total - rep.afe_total) /
                       std::abs(rep.empirical_total);
    const cplx h0 = h_poly(0.0, t);
    const double num_diff = std::abs((rep.empirical_total - rep.afe_total) * h0);
    const double num_true = std::abs(rep.empirical_total * h0);
    return {gap <= 1e-5,
            fmt("relative gap |hurwitz - afe|/|hurwitz| = %.3e at sharp Q=50, target <= 1e-5; "
                "hurwitz total %.4e, afe total %.4e: the family coefficient sums land %.2e "
                "from a true product of %.2e (per-character scale ~1e3, residuals ~1e-6 of "
                "it), and the afe route divides that noise by H(0) = %.2e; %.0fs",
                gap, rep.empirical_total.real(), rep.afe_total.real(), num_diff, num_true,
                h0.real(), rep.runtime_seconds)};
  } catch (const std::exception& e) {
    return {false, fmt("afe run refused: %s", e.what())};
  }
}

// 12. byte-identical reports across thread counts {1, 4, 8}
Outcome crit_12() {
  auto csv_at = [](int threads, bool zero) {
    MomentConfig cfg;
    cfg.big_q = zero ? 60 : 12;
    if (!zero) cfg.shifts = pinned_shifts();
    cfg.weight = zero ? CutoffMode::sharp : CutoffMode::smooth;
    cfg.thread_hint = threads;
    return report_csv(moment_report(cfg), cfg);
  };
  bool ok = true;
  for (bool zero : {true, false}) {
    const std::string one = csv_at(1, zero);
    ok = ok && one == csv_at(4, zero) && one == csv_at(8, zero);
  }
  return {ok, ok ? std::string("zero-shift Q=60 and shifted smooth Q=12 reports byte-identical "
                              "across threads {1,4,8}")
                 : std::string("reports differ across thread counts")};
}

}  // namespace

int main(int argc, char** argv) {
  std::string only;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc)
      only = argv[++i];
    else {
      std::fprintf(stderr, "usage: acceptance [--criterion <1..10|11a|11b|11c|12>]\n");
      return 1;
    }
  }

  struct Entry {
    const char* tag;
    Outcome (*fn)();
  };
  const Entry entries[] = {
      {"1", crit_1},   {"2", crit_2},     {"3", crit_3},     {"4", crit_4},
      {"5", crit_5},   {"6", crit_6},     {"7", crit_7},     {"8", crit_8},
      {"9", crit_9},   {"10", crit_10},   {"11a", crit_11a}, {"11b", crit_11b},
      {"11c", crit_11c}, {"12", crit_12},
  };

  int failures = 0;
  bool matched = false;
  for (const Entry& e : entries) {
    if (!only.empty() && only != e.tag) continue;
    matched = true;
    const Outcome out = e.fn();
    std::printf("criterion %s: %s (%s)\n", e.tag, out.pass ? "PASS" : "FAIL",
                out.detail.c_str());
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  if (!matched) {
    std::fprintf(stderr, "unknown criterion tag '%s'\n", only.c_str());
    return 1;
  }
  return failures;
}
