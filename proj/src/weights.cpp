#include "lmom/weights.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lmom {
namespace {

constexpr double kDirectSwitch = 4.0;  // X threshold between the two contours

// G(1/2+s) H(s) X^{-s} without the 1/s
cplx kernel(cplx s, const Shifts& t, double ln_x) {
  return g_factor(0.5 + s, t) * h_poly(s, t) * std::exp(-s * ln_x);
}

}  // namespace

cplx g_factor(cplx s, const Shifts& t) {
  cplx out = 1.0;
  for (int j = 0; j < 3; ++j)
    out *= complex_gamma(0.5 * (s + t.alpha[j])) * complex_gamma(0.5 * (s - t.beta[j]));
  return out;
}

cplx h_poly(cplx s, const Shifts& t) {
  const cplx s2 = s * s;
  cplx out = 1.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      cplx g = 0.5 * (t.alpha[i] - t.beta[j]);
      out *= s2 - g * g;
    }
  return out;
}

WeightEvaluation w_weight(double xi, double eta, double mu, const Shifts& t,
                          const ContourSpec& contour) {
  if (!(xi > 0.0) || !(eta > 0.0) || !(mu > 0.0))
    throw std::invalid_argument("w_weight: xi, eta, mu must be positive");
  const double pi = std::numbers::pi;
  const double ln_x = std::log(xi) + std::log(eta) + 3.0 * (std::log(pi) - std::log(mu));
  const cplx pref = std::exp(t.delta() * std::log(mu / pi));
  auto integrand = [&](cplx s) { return kernel(s, t, ln_x) / s; };

  WeightEvaluation out;
  if (ln_x >= std::log(kDirectSwitch)) {
    LineIntegral li = vertical_line_integral(integrand, contour);
    out.value = pref * li.value;
    out.contour_abscissa = contour.real_part;
    out.truncation_remainder = std::abs(pref) * li.truncation;
    return out;
  }

  // Small X.  On the direct line the integral evaluates to O(X^{1/2} log^5 X)
  // from integrand mass O(X^{-c}), so double precision loses the value.  Move
  // to Re s = -3/2 and keep what the contour crossed:
  //   s = 0:        residue G(1/2) H(0)
  //   s ~ -1/2:     the six gamma poles at -1/2-alpha_i, -1/2+beta_j, summed
  //                 collectively by a trapezoidal circle (radius 0.35) --
  //                 individual residues nearly cancel, the circle does not
  //                 amplify that cancellation.
  // Between -1/2 and the next pole cluster at -5/2 the integrand is analytic,
  // so the remaining line carries only the O(X^{3/2}) tail.
  if (t.max_magnitude() > 0.3)
    throw std::invalid_argument("w_weight: shifts too large for the rerouted contour");

  cplx total = g_factor(0.5, t) * h_poly(0.0, t);

  const double radius = 0.35;
  const int n_nodes = 256;
  KahanSum ring, ring_half;
  for (int k = 0; k < n_nodes; ++k) {
    cplx w = std::polar(radius, 2.0 * pi * k / n_nodes);
    cplx term = integrand(-0.5 + w) * w;
    ring.add(term);
    if (k % 2 == 0) ring_half.add(term);
  }
  cplx circle = ring.value() / static_cast<double>(n_nodes);
  double circle_err = std::abs(circle - ring_half.value() / (0.5 * n_nodes));

  ContourSpec left = contour;
  left.real_part = -1.5;
  LineIntegral li = vertical_line_integral(integrand, left);

  out.value = pref * (total + circle + li.value);
  out.contour_abscissa = left.real_part;
  out.truncation_remainder = std::abs(pref) * (li.truncation + circle_err);
  return out;
}

WeightTable::WeightTable(const Shifts& t, double x_min, double x_max, int nodes)
    : x_min_(x_min), x_max_(x_max), delta_(t.delta()) {
  if (!(x_min > 0.0) || !(x_max > x_min))
    throw std::invalid_argument("WeightTable: need 0 < x_min < x_max");
  if (nodes < 16) throw std::invalid_argument("WeightTable: too few nodes");
  ln_lo_ = std::log(x_min);
  ln_hi_ = std::log(x_max);
  const double pi = std::numbers::pi;

  // I(X) at Chebyshev points of the first kind in ln X, through w_weight at
  // eta = mu = 1; the (1/pi)^delta prefactor divides back out.
  const cplx unscale = std::exp(delta_ * std::log(pi));
  std::vector<cplx> val(nodes);
  for (int k = 0; k < nodes; ++k) {
    double u = std::cos(pi * (k + 0.5) / nodes);
    double ln_x = 0.5 * (ln_lo_ + ln_hi_) + 0.5 * (ln_hi_ - ln_lo_) * u;
    val[k] = unscale * w_weight(std::exp(ln_x) / (pi * pi * pi), 1.0, 1.0, t).value;
  }
  coeff_.assign(nodes, 0.0);
  for (int j = 0; j < nodes; ++j) {
    KahanSum acc;
    for (int k = 0; k < nodes; ++k)
      acc.add(val[k] * std::cos(pi * j * (k + 0.5) / nodes));
    coeff_[j] = acc.value() * (2.0 / nodes);
  }
  coeff_[0] *= 0.5;
}

cplx WeightTable::integral_at(double ln_x) const {
  const double u = (2.0 * ln_x - (ln_lo_ + ln_hi_)) / (ln_hi_ - ln_lo_);
  cplx b1 = 0.0, b2 = 0.0;
  for (int j = static_cast<int>(coeff_.size()) - 1; j >= 1; --j) {
    cplx b0 = 2.0 * u * b1 - b2 + coeff_[j];
    b2 = b1;
    b1 = b0;
  }
  return u * b1 - b2 + coeff_[0];
}

cplx WeightTable::weight(double xi, double eta, double mu) const {
  if (!(xi > 0.0) || !(eta > 0.0) || !(mu > 0.0))
    throw std::invalid_argument("WeightTable: xi, eta, mu must be positive");
  const double pi = std::numbers::pi;
  const double ln_x =
      std::log(xi) + std::log(eta) + 3.0 * (std::log(pi) - std::log(mu));
  if (ln_x > ln_hi_) return 0.0;  // past the built-out cutoff: dead tail
  if (ln_x < ln_lo_)
    throw std::out_of_range("WeightTable: X below tabulated range");
  return std::exp(delta_ * std::log(mu / pi)) * integral_at(ln_x);
}

}  // namespace lmom
