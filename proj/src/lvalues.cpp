#include "lmom/lvalues.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lmom/analysis.hpp"

namespace lmom {
namespace {

// psi(x) = log x - 1/(2x) - sum_j B_{2j} / (2j x^{2j}), shifted up through
// psi(x) = psi(x+1) - 1/x until x >= 12.  Real arguments suffice here: the
// rows below use x = a/q in (0, 1).
double digamma(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("digamma: argument must be positive");
  double acc = 0.0;
  while (x < 12.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  // B_{2j}/(2j), j = 1..6; the first omitted term is below 1e-16 at x >= 12
  static const double kB2jOver2j[] = {1.0 / 12.0,  -1.0 / 120.0, 1.0 / 252.0,
                                      -1.0 / 240.0, 1.0 / 132.0,  -691.0 / 32760.0};
  const double inv2 = 1.0 / (x * x);
  double corr = 0.0;
  double scale = inv2;
  for (double c : kB2jOver2j) {
    corr += c * scale;
    scale *= inv2;
  }
  return acc + std::log(x) - 0.5 / x - corr;
}

// L(1, chi) = -(1/q) sum_{a<q} chi(a) psi(a/q); valid because sum_a chi(a) = 0
// kills the shared 1/(s-1) pole of the Hurwitz rows.
cplx l_at_one_nonprincipal(const DirichletCharacter& chi) {
  const u64 q = chi.modulus;
  KahanSum sum;
  for (u64 a = 1; a < q; ++a) {
    cplx c = chi.value(a);
    if (c.real() == 0.0 && c.imag() == 0.0) continue;
    sum.add(c * digamma(static_cast<double>(a) / static_cast<double>(q)));
  }
  return -sum.value() / static_cast<double>(q);
}

}  // namespace

cplx l_value(const DirichletCharacter& chi, cplx s) {
  const u64 q = chi.modulus;
  if (chi.is_principal()) {
    if (std::abs(s - cplx(1.0)) < 1e-12)
      throw std::invalid_argument("l_value: principal character has a pole at s = 1");
    cplx out = riemann_zeta(s);
    for (const auto& [p, e] : factorize(q).prime_powers)
      out *= 1.0 - std::exp(-s * std::log(static_cast<double>(p)));
    return out;
  }
  if (std::abs(s - cplx(1.0)) < 1e-8) return l_at_one_nonprincipal(chi);
  KahanSum sum;
  for (u64 a = 1; a <= q; ++a) {
    cplx c = chi.value(a);
    if (c.real() == 0.0 && c.imag() == 0.0) continue;
    sum.add(c * hurwitz_zeta(s, static_cast<double>(a) / static_cast<double>(q)));
  }
  return std::exp(-s * std::log(static_cast<double>(q))) * sum.value();
}

cplx root_number(const DirichletCharacter& chi) {
  if (!chi.is_primitive() || !chi.even)
    throw std::invalid_argument("root_number: requires a primitive even character");
  GaussSumResult g = gauss_sum(chi);
  return g.value / g.modulus_root;
}

CompletedLValue completed_lambda(const DirichletCharacter& chi, cplx s) {
  if (!chi.is_primitive() || !chi.even)
    throw std::invalid_argument("completed_lambda: requires a primitive even character");
  const double q = static_cast<double>(chi.modulus);
  CompletedLValue out;
  out.modulus = chi.modulus;
  out.shift_point = s;
  out.gamma_factor =
      std::exp(0.5 * s * std::log(q / std::numbers::pi)) * complex_gamma(0.25 + 0.5 * s);
  out.raw_l = l_value(chi, 0.5 + s);
  out.value = out.gamma_factor * out.raw_l;
  return out;
}

cplx lambda_shifted(const DirichletCharacter& chi, const Shifts& t) {
  const DirichletCharacter bar = conjugate_character(chi);
  cplx prod = 1.0;
  for (int j = 0; j < 3; ++j) {
    prod *= completed_lambda(chi, t.alpha[j]).value;
    prod *= completed_lambda(bar, -t.beta[j]).value;
  }
  return prod;
}

}  // namespace lmom
