#pragma once
// ============================================================================
// moments: the experiment driver.
//
// Empirical side:   sum_q w(q/Q) sum♭_chi Lambda(chi; alpha, beta),
// with w either the smooth bump on (1, 2) or the sharp cutoff q <= Q, and
// Sum♭ over primitive even characters.  Zero shifts mean the plain sixth
// moment |L(1/2,chi)|^6 (no completed factors, no H(0) anywhere).
//
// Two routes to the same number:
//   hurwitz  - enumerate characters and evaluate each completed product
//              through the Hurwitz-zeta rows;
//   afe      - the coefficient-sum identity
//                  H(0) Lambda(chi; a, b) = Lambda_0(chi; a, b)
//                                         + Lambda_0(chi; b, a),
//              family-summed, so the character sum collapses through
//              orthogonality into divisor-constrained (m, n) pairs.
//
// A caution that shapes the tests: at admissible shift sizes (|shift| < 0.3,
// forced by the contour reroute in weights) H(0) = -prod (gap/2)^2 lands
// between 1e-20 and 1e-40 while the Lambda_0 coefficient sums are O(10^3).
// The two orderings cancel down to H(0) Lambda, so after dividing by H(0)
// the afe route's totals amplify the coefficient sums' double-precision
// rounding by |H(0)|^{-1} and carry no usable digits.  The identity itself is
// verified against the coefficient-sum scale, where doubles can speak.
// ============================================================================

#include <functional>
#include <string>
#include <vector>

#include "lmom/characters.hpp"
#include "lmom/shifts.hpp"

namespace lmom {

enum class CutoffMode { smooth, sharp };
enum class MomentMethod { hurwitz, afe, both };

struct MomentConfig {
  u64 big_q = 20;
  Shifts shifts{};                    // all-zero: plain |L(1/2)|^6 moment
  CutoffMode weight = CutoffMode::smooth;
  std::function<double(double)> psi;  // smooth-mode weight; empty = bump on (1,2)
  u64 afe_truncation = 4'000'000;     // hard cap on mn in the coefficient sums
  MomentMethod method = MomentMethod::hurwitz;
  int thread_hint = 1;                // LMOM_THREADS overrides when set
};

struct PerModulusRow {
  u64 q = 0;
  u64 phi_flat = 0;
  cplx empirical{0.0, 0.0};
  cplx predicted{0.0, 0.0};
};

struct MomentReport {
  std::vector<PerModulusRow> per_q;  // ascending q, one row per modulus in range
  cplx empirical_total{0.0, 0.0};
  cplx afe_total{0.0, 0.0};      // filled for method afe/both
  cplx predicted_total{0.0, 0.0};
  cplx ratio{0.0, 0.0};          // empirical/predicted; 1 when both vanish
  double runtime_seconds = 0.0;  // never serialized into the CSV
};

// Lambda_0(chi; alpha, beta)
//     = sum_{mn <= mn_max} sigma(m; alpha) sigma(n; -beta) chi(m) conj chi(n)
//                          / sqrt(mn) * W(m, n; q).
// The tail beyond mn_max is estimated from the average divisor density
// (log N)^5/5! against the interpolated cutoff; an mn_max whose estimated
// tail exceeds 1e-8 of the bulk is rejected, with the required size in the
// message.  If tail_estimate is non-null it receives the absolute estimate.
cplx afe_lambda0(const DirichletCharacter& chi, const Shifts& t, u64 mn_max,
                 double* tail_estimate = nullptr);

// Coefficient-sum size needed at modulus q for the estimated relative tail to
// drop below rel_tol (the same scan afe_lambda0 and the afe route validate
// against).
u64 afe_required_mn(u64 q, const Shifts& t, double rel_tol);

// Empirical family sums by the configured method.  per_q carries one row per
// modulus in range (sharp: q <= Q, smooth: Q < q < 2Q), empirical_total their
// compensated ascending-q sum.  Work is partitioned by modulus across
// thread_hint threads (LMOM_THREADS overrides); per-row values never depend
// on the partition, so reports are byte-identical across thread counts.
MomentReport empirical_moment(const MomentConfig& cfg);

// empirical_moment plus the per-row predicted side: phiflat * Qtilde at
// admissible shifts, the corollary density at zero shifts, both under the
// same cutoff weight; ratio = empirical_total/predicted_total (1 if both
// vanish).
MomentReport moment_report(const MomentConfig& cfg);

// CSV with a #-comment header (tool version, config echo) and rows
//     q, phi_flat, Re emp, Im emp, Re pred, Im pred
// in %.17g.  Thread counts and runtimes are deliberately excluded: identical
// configurations must produce identical bytes.
std::string report_csv(const MomentReport& rep, const MomentConfig& cfg);

}  // namespace lmom
