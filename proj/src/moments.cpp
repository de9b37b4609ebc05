#include "lmom/moments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <utility>

#include "lmom/lvalues.hpp"
#include "lmom/mainterm.hpp"
#include "lmom/weights.hpp"

namespace lmom {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kRelTailTol = 1e-8;
// beyond this X the cutoff sits ~1e-11 below its bulk; the interpolation
// table reads 0 there and the density scan treats it as gone
constexpr double kXCut = 2000.0;

bool zero_shifts(const Shifts& t) { return t.max_magnitude() == 0.0; }

Shift3 negated(const Shift3& a) { return {-a[0], -a[1], -a[2]}; }

Shifts swapped(const Shifts& t) {
  Shifts s;
  s.alpha = t.beta;
  s.beta = t.alpha;
  return s;
}

int resolve_threads(int hint) {
  if (const char* env = std::getenv("LMOM_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 256) return static_cast<int>(v);
  }
  return std::clamp(hint, 1, 256);
}

double cutoff_weight(const MomentConfig& cfg, u64 q) {
  if (cfg.weight == CutoffMode::sharp) return 1.0;
  double x = static_cast<double>(q) / static_cast<double>(cfg.big_q);
  return cfg.psi ? cfg.psi(x) : psi_bump(x);
}

std::vector<u64> moduli_in_range(const MomentConfig& cfg) {
  std::vector<u64> qs;
  if (cfg.weight == CutoffMode::sharp) {
    for (u64 q = 1; q <= cfg.big_q; ++q) qs.push_back(q);
  } else {
    for (u64 q = cfg.big_q + 1; q < 2 * cfg.big_q; ++q) qs.push_back(q);
  }
  return qs;
}

// ---- coefficient-sum tail model -------------------------------------------
// sum_{mn = N} sigma sigma averages like the d6 density (log N)^5/5!, so
// integrate (log N)^5/120 N^{-1/2} |W(N; q)| dN on a log grid and compare the
// two sides of the cut.  Order-of-magnitude honest, not a bound; reported
// estimates carry a 3x safety factor.
struct TailSplit {
  double bulk = 0.0;
  double tail = 0.0;
};

double density_point(double n, double w_mag) {
  double ln = std::log(n);
  return std::pow(ln, 5) / 120.0 * w_mag * std::sqrt(n);  // f(N) N for dlnN measure
}

TailSplit tail_scan(const WeightTable& wt, u64 q, double mn_max) {
  double n_top = kXCut * std::pow(static_cast<double>(q), 3) / (kPi * kPi * kPi);
  n_top = std::max(n_top, 4.0 * mn_max);
  const double lo = std::log(1.5), hi = std::log(n_top);
  const int steps = 600;
  const double h = (hi - lo) / steps;
  TailSplit out;
  for (int k = 0; k <= steps; ++k) {
    double n = std::exp(lo + k * h);
    double w = std::abs(wt.weight(n, 1.0, static_cast<double>(q)));
    double f = density_point(n, w) * h * (k == 0 || k == steps ? 0.5 : 1.0);
    (n <= mn_max ? out.bulk : out.tail) += f;
  }
  return out;
}

WeightTable scan_table(const Shifts& t, u64 q_max) {
  double x_min = 0.8 * kPi * kPi * kPi / std::pow(static_cast<double>(q_max), 3);
  return WeightTable(t, std::min(x_min, 1.0), kXCut);
}

u64 required_mn_from(const WeightTable& wt, u64 q, double rel_tol) {
  double n_top = kXCut * std::pow(static_cast<double>(q), 3) / (kPi * kPi * kPi);
  const double lo = std::log(1.5), hi = std::log(std::max(n_top, 64.0));
  const int steps = 600;
  const double h = (hi - lo) / steps;
  std::vector<double> f(steps + 1);
  for (int k = 0; k <= steps; ++k) {
    double n = std::exp(lo + k * h);
    f[k] = density_point(n, std::abs(wt.weight(n, 1.0, static_cast<double>(q)))) * h;
  }
  std::vector<double> suffix(steps + 2, 0.0);
  for (int k = steps; k >= 0; --k) suffix[k] = suffix[k + 1] + f[k];
  double prefix = 0.0;
  for (int k = 0; k <= steps; ++k) {
    prefix += f[k];
    // half tolerance so a fresh scan on a different grid still lands inside
    if (suffix[k + 1] <= 0.5 * rel_tol * prefix)
      return std::max<u64>(64, static_cast<u64>(std::ceil(std::exp(lo + k * h))));
  }
  return std::max<u64>(64, static_cast<u64>(std::ceil(n_top)));
}

// ---- per-modulus family sums ------------------------------------------------

cplx hurwitz_family_sum(u64 q, const Shifts& t, bool zero) {
  if (count_primitive_even(q) == 0) return {0.0, 0.0};
  KahanSum acc;
  for (const DirichletCharacter& chi : enumerate_characters(q)) {
    if (!chi.is_primitive() || !chi.even) continue;
    if (zero) {
      double a = std::abs(l_value(chi, cplx(0.5, 0.0)));
      double a2 = a * a;
      acc.add(cplx(a2 * a2 * a2, 0.0));
    } else {
      acc.add(lambda_shifted(chi, t));
    }
  }
  return acc.value();
}

struct AfeTables {
  std::vector<cplx> sa_ab, sb_ab;  // sigma(.; alpha), sigma(.; -beta)
  std::vector<cplx> sa_ba, sb_ba;  // sigma(.; beta),  sigma(.; -alpha)
  WeightTable wt_ab, wt_ba;
  cplx h0;
  u64 mn_cap;
};

// sum♭_chi Lambda_0 via orthogonality: the character average turns into
// divisor layers r | q weighted mu(q/r) phi(r)/2 over the classes
// n = +-m mod r.  For r <= 2 the two classes coincide, so one pass at double
// weight; for r >= 3 they are disjoint because (m, r) = 1.
cplx afe_coefficient_sum(u64 q, const std::vector<cplx>& sa, const std::vector<cplx>& sb,
                         const WeightTable& wt, u64 mn_cap) {
  double n_top = kXCut * std::pow(static_cast<double>(q), 3) / (kPi * kPi * kPi);
  u64 mn_q = std::min<u64>(mn_cap, static_cast<u64>(n_top) + 1);
  std::vector<std::pair<u64, double>> layers;
  for (u64 r = 1; r <= q; ++r) {
    if (q % r != 0) continue;
    int mu = mobius(q / r);
    if (mu == 0) continue;
    layers.emplace_back(r, 0.5 * mu * static_cast<double>(euler_phi(r)));
  }
  const double qd = static_cast<double>(q);
  KahanSum acc;
  for (const auto& [r, wr] : layers) {
    for (u64 m = 1; m <= mn_q; ++m) {
      if (std::gcd(m, q) != 1) continue;
      const u64 lim = mn_q / m;
      const cplx sam = sa[m];
      const double md = static_cast<double>(m);
      const int nsigns = r <= 2 ? 1 : 2;
      for (int sgn = 0; sgn < nsigns; ++sgn) {
        u64 c = sgn == 0 ? m % r : (r - m % r) % r;
        double weight = (r <= 2 ? 2.0 : 1.0) * wr;
        for (u64 n = (c == 0 ? r : c); n <= lim; n += r) {
          if (std::gcd(n, q) != 1) continue;
          cplx w = wt.weight(md, static_cast<double>(n), qd);
          if (w == cplx(0.0, 0.0)) continue;
          acc.add(weight * sam * sb[n] / std::sqrt(md * static_cast<double>(n)) * w);
        }
      }
    }
  }
  return acc.value();
}

cplx afe_family_sum(u64 q, const AfeTables& tabs) {
  if (count_primitive_even(q) == 0) return {0.0, 0.0};
  cplx s_ab = afe_coefficient_sum(q, tabs.sa_ab, tabs.sb_ab, tabs.wt_ab, tabs.mn_cap);
  cplx s_ba = afe_coefficient_sum(q, tabs.sa_ba, tabs.sb_ba, tabs.wt_ba, tabs.mn_cap);
  return (s_ab + s_ba) / tabs.h0;
}

}  // namespace

u64 afe_required_mn(u64 q, const Shifts& t, double rel_tol) {
  if (q == 0) throw std::invalid_argument("afe_required_mn: q must be positive");
  if (!(rel_tol > 0.0)) throw std::invalid_argument("afe_required_mn: tolerance must be positive");
  WeightTable wt = scan_table(t, q);
  return required_mn_from(wt, q, rel_tol);
}

cplx afe_lambda0(const DirichletCharacter& chi, const Shifts& t, u64 mn_max,
                 double* tail_estimate) {
  const u64 q = chi.modulus;
  if (!chi.is_primitive() || !chi.even)
    throw std::invalid_argument("afe_lambda0: chi must be primitive and even");
  if (mn_max < 16) throw std::invalid_argument("afe_lambda0: mn_max too small to mean anything");

  WeightTable wt = scan_table(t, q);
  TailSplit split = tail_scan(wt, q, static_cast<double>(mn_max));
  if (split.tail > kRelTailTol * split.bulk) {
    u64 needed = required_mn_from(wt, q, kRelTailTol);
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "afe_lambda0: mn_max %llu leaves an estimated relative tail %.2e; needs about %llu",
                  static_cast<unsigned long long>(mn_max), split.tail / split.bulk,
                  static_cast<unsigned long long>(needed));
    throw std::invalid_argument(msg);
  }
  if (tail_estimate != nullptr) *tail_estimate = 3.0 * split.tail;

  std::vector<cplx> sa = sigma_table(mn_max, t.alpha);
  std::vector<cplx> sb = sigma_table(mn_max, negated(t.beta));
  const double qd = static_cast<double>(q);
  KahanSum acc;
  for (u64 m = 1; m <= mn_max; ++m) {
    cplx cm = chi.value(m % q);
    if (cm == cplx(0.0, 0.0)) continue;
    const u64 lim = mn_max / m;
    const double md = static_cast<double>(m);
    for (u64 n = 1; n <= lim; ++n) {
      cplx cn = chi.value(n % q);
      if (cn == cplx(0.0, 0.0)) continue;
      cplx w = wt.weight(md, static_cast<double>(n), qd);
      if (w == cplx(0.0, 0.0)) continue;
      acc.add(sa[m] * sb[n] * cm * std::conj(cn) / std::sqrt(md * static_cast<double>(n)) * w);
    }
  }
  return acc.value();
}

MomentReport empirical_moment(const MomentConfig& cfg) {
  if (cfg.big_q == 0) throw std::invalid_argument("empirical_moment: Q must be positive");
  if (cfg.thread_hint < 1) throw std::invalid_argument("empirical_moment: thread_hint must be positive");
  const bool zero = zero_shifts(cfg.shifts);
  const bool want_hurwitz = cfg.method != MomentMethod::afe;
  const bool want_afe = cfg.method != MomentMethod::hurwitz;
  if (zero && want_afe)
    throw std::invalid_argument(
        "empirical_moment: zero shifts have H(0) = 0, the afe route is undefined");

  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<u64> qs = moduli_in_range(cfg);

  MomentReport rep;
  rep.per_q.resize(qs.size());
  for (std::size_t i = 0; i < qs.size(); ++i) {
    rep.per_q[i].q = qs[i];
    rep.per_q[i].phi_flat = count_primitive_even(qs[i]);
  }
  if (qs.empty()) {
    rep.empirical_total = rep.afe_total = {0.0, 0.0};
    return rep;
  }

  // afe preflight: the truncation cap must cover the estimated 1e-8 tail at
  // the widest modulus in range, otherwise the run is refused up front
  std::unique_ptr<AfeTables> tabs;
  if (want_afe) {
    const u64 q_max = qs.back();
    WeightTable wt_ab = scan_table(cfg.shifts, q_max);
    u64 needed = required_mn_from(wt_ab, q_max, kRelTailTol);
    if (needed > cfg.afe_truncation) {
      char msg[200];
      std::snprintf(msg, sizeof msg,
                    "empirical_moment: afe route at q = %llu needs mn up to about %llu for a %.0e "
                    "relative tail; the configured cap is %llu",
                    static_cast<unsigned long long>(q_max), static_cast<unsigned long long>(needed),
                    kRelTailTol, static_cast<unsigned long long>(cfg.afe_truncation));
      throw std::invalid_argument(msg);
    }
    tabs.reset(new AfeTables{sigma_table(needed, cfg.shifts.alpha),
                             sigma_table(needed, negated(cfg.shifts.beta)),
                             sigma_table(needed, cfg.shifts.beta),
                             sigma_table(needed, negated(cfg.shifts.alpha)), std::move(wt_ab),
                             scan_table(swapped(cfg.shifts), q_max), h_poly(0.0, cfg.shifts),
                             needed});
  }

  // one slot per modulus; workers stride over slots, the merge is a single
  // ascending compensated pass, so thread count never touches the bytes
  std::vector<cplx> slot_h(qs.size(), cplx(0.0, 0.0));
  std::vector<cplx> slot_a(qs.size(), cplx(0.0, 0.0));
  const int n_threads = std::min<int>(resolve_threads(cfg.thread_hint),
                                      static_cast<int>(qs.size()));
  auto worker = [&](int w, std::exception_ptr& err) {
    try {
      for (std::size_t i = static_cast<std::size_t>(w); i < qs.size();
           i += static_cast<std::size_t>(n_threads)) {
        const double wq = cutoff_weight(cfg, qs[i]);
        if (wq == 0.0) continue;
        if (want_hurwitz) slot_h[i] = wq * hurwitz_family_sum(qs[i], cfg.shifts, zero);
        if (want_afe) slot_a[i] = wq * afe_family_sum(qs[i], *tabs);
      }
    } catch (...) {
      err = std::current_exception();
    }
  };
  std::vector<std::exception_ptr> errs(n_threads);
  if (n_threads == 1) {
    worker(0, errs[0]);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int w = 0; w < n_threads; ++w) pool.emplace_back(worker, w, std::ref(errs[w]));
    for (std::thread& th : pool) th.join();
  }
  for (std::exception_ptr& e : errs)
    if (e) std::rethrow_exception(e);

  KahanSum tot_h, tot_a;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    tot_h.add(slot_h[i]);
    tot_a.add(slot_a[i]);
    rep.per_q[i].empirical = want_hurwitz ? slot_h[i] : slot_a[i];
  }
  rep.empirical_total = want_hurwitz ? tot_h.value() : tot_a.value();
  if (want_afe) rep.afe_total = tot_a.value();
  rep.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

MomentReport moment_report(const MomentConfig& cfg) {
  MomentReport rep = empirical_moment(cfg);
  const bool zero = zero_shifts(cfg.shifts);
  KahanSum pred;
  for (PerModulusRow& row : rep.per_q) {
    if (row.phi_flat == 0) continue;
    const double wq = cutoff_weight(cfg, row.q);
    if (wq == 0.0) continue;
    row.predicted = zero ? cplx(wq * corollary_density(row.q), 0.0)
                         : wq * static_cast<double>(row.phi_flat) * q_tilde(row.q, cfg.shifts);
    pred.add(row.predicted);
  }
  rep.predicted_total = pred.value();
  // ratio convention: an empty family against an empty prediction reads 1;
  // a zero prediction against a live empirical value is left to divide
  // (and prints as a non-finite value rather than pretending)
  if (std::abs(rep.empirical_total) == 0.0 && std::abs(rep.predicted_total) == 0.0)
    rep.ratio = cplx(1.0, 0.0);
  else
    rep.ratio = rep.empirical_total / rep.predicted_total;
  return rep;
}

std::string report_csv(const MomentReport& rep, const MomentConfig& cfg) {
  std::string out;
  out.reserve(128 + 96 * rep.per_q.size());
  char line[256];
  out += "# lmom 1.0.0\n";
  std::snprintf(line, sizeof line, "# Q=%llu weight=%s method=%s afe_truncation=%llu psi=%s\n",
                static_cast<unsigned long long>(cfg.big_q),
                cfg.weight == CutoffMode::sharp ? "sharp" : "smooth",
                cfg.method == MomentMethod::hurwitz ? "hurwitz"
                : cfg.method == MomentMethod::afe   ? "afe"
                                                    : "both",
                static_cast<unsigned long long>(cfg.afe_truncation),
                cfg.psi ? "custom" : "bump");
  out += line;
  if (zero_shifts(cfg.shifts)) {
    out += "# shifts: zero\n";
  } else {
    out += "# shifts:";
    for (int j = 0; j < 6; ++j) {
      cplx v = j < 3 ? cfg.shifts.alpha[j] : cfg.shifts.beta[j - 3];
      std::snprintf(line, sizeof line, " %c%d=%.17g%+.17gi", j < 3 ? 'a' : 'b', j % 3 + 1,
                    v.real(), v.imag());
      out += line;
    }
    out += "\n";
  }
  out += "# columns: q, phi_flat, Re emp, Im emp, Re pred, Im pred\n";
  for (const PerModulusRow& row : rep.per_q) {
    std::snprintf(line, sizeof line, "%llu, %llu, %.17g, %.17g, %.17g, %.17g\n",
                  static_cast<unsigned long long>(row.q),
                  static_cast<unsigned long long>(row.phi_flat), row.empirical.real(),
                  row.empirical.imag(), row.predicted.real(), row.predicted.imag());
    out += line;
  }
  return out;
}

}  // namespace lmom
