#include "lmom/expsums.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "lmom/analysis.hpp"

namespace lmom {

namespace {

constexpr double kPi = 3.14159265358979323846;

u64 umod(i64 v, u64 m) {
  i64 t = v % static_cast<i64>(m);
  return static_cast<u64>(t < 0 ? t + static_cast<i64>(m) : t);
}

// units mod r with their inverses, one extended-Euclid pass per unit
struct UnitTable {
  std::vector<u64> unit;
  std::vector<u64> inv;
};

UnitTable unit_table(u64 r) {
  UnitTable t;
  t.unit.reserve(r);
  for (u64 x = 1; x < r; ++x) {
    if (std::gcd(x, r) != 1) continue;
    t.unit.push_back(x);
    t.inv.push_back(mod_inverse(x, r));
  }
  return t;
}

// e(k/r) for k = 0..r-1; the inner loops below index this instead of calling
// exp, which is what keeps the O(r^2) double sums cheap
std::vector<cplx> root_table(u64 r) {
  std::vector<cplx> w(r);
  for (u64 k = 0; k < r; ++k) w[k] = e_frac(static_cast<i64>(k), r);
  return w;
}

}  // namespace

// ---- Kloosterman ------------------------------------------------------------

ExpSumValue kloosterman(i64 a, i64 b, u64 c) {
  if (c == 0) throw std::invalid_argument("kloosterman: modulus must be positive");
  if (c == 1) return {cplx(1.0, 0.0), 1, SumMethod::direct};
  u64 ar = umod(a, c), br = umod(b, c);
  KahanSum acc;
  for (u64 x = 1; x < c; ++x) {
    if (std::gcd(x, c) != 1) continue;
    u64 phase = (ar * x + br * mod_inverse(x, c)) % c;
    acc.add(e_frac(static_cast<i64>(phase), c));
  }
  cplx v = acc.value();
  // x <-> -x conjugates the terms when a = b, so the sum is real; drift past
  // 1e-9 means the evaluator itself is broken
  if (ar == br && std::abs(v.imag()) > 1e-9)
    throw std::runtime_error("kloosterman: S(a,a;c) lost reality");
  return {v, c, SumMethod::direct};
}

// ---- hyper-Kloosterman --------------------------------------------------------

ExpSumValue hyper_kloosterman(i64 f, i64 g, i64 h, u64 r) {
  if (r == 0) throw std::invalid_argument("hyper_kloosterman: modulus must be positive");
  if (r == 1) return {cplx(1.0, 0.0), 1, SumMethod::direct};
  u64 fr = umod(f, r), gr = umod(g, r), hr = umod(h, r);
  UnitTable t = unit_table(r);
  std::vector<cplx> w = root_table(r);
  KahanSum acc;
  for (std::size_t i = 0; i < t.unit.size(); ++i) {
    u64 af = t.unit[i] * fr % r;
    u64 ia = t.inv[i];
    for (std::size_t j = 0; j < t.unit.size(); ++j) {
      u64 idx = (af + t.unit[j] * gr + (ia * t.inv[j] % r) * hr) % r;
      acc.add(w[idx]);
    }
  }
  return {acc.value(), r, SumMethod::direct};
}

// ---- Ramanujan ----------------------------------------------------------------

ExpSumValue ramanujan_sum(u64 r, i64 n) {
  if (r == 0) throw std::invalid_argument("ramanujan_sum: modulus must be positive");
  u64 g = std::gcd(umod(n, r), r);  // gcd(0, r) = r covers n = 0
  u64 m = r / g;
  int mu = mobius(m);
  double val = 0.0;
  if (mu != 0)
    val = static_cast<double>(mu) * static_cast<double>(euler_phi(r)) /
          static_cast<double>(euler_phi(m));
  return {cplx(val, 0.0), r, SumMethod::closed_form};
}

// ---- smooth window and its transform --------------------------------------------

double v_bump(double u) {
  double t = u - 1.5;
  if (std::abs(t) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

cplx v_hat(double xi) {
  // the transform is ~1e-20 of v_hat(0) out here, below anything the
  // truncation rule can ask for, and the quadrature stops resolving the
  // oscillation anyway
  if (std::abs(xi) > 200.0) return cplx(0.0, 0.0);
  constexpr int kOrder = 1024;
  struct Cache {
    std::vector<double> x;   // nodes mapped onto the support (1/2, 5/2)
    std::vector<double> vw;  // V(x) times the quadrature weight
  };
  static const Cache cache = [] {
    const GaussLegendre& gl = gauss_legendre(kOrder);
    Cache c;
    c.x.resize(kOrder);
    c.vw.resize(kOrder);
    for (int k = 0; k < kOrder; ++k) {
      c.x[k] = 1.5 + gl.node[k];  // half-width 1 about the center
      c.vw[k] = gl.weight[k] * v_bump(c.x[k]);
    }
    return c;
  }();
  KahanSum acc;
  for (int k = 0; k < kOrder; ++k) {
    double phase = -2.0 * kPi * xi * cache.x[k];
    acc.add(cache.vw[k] * cplx(std::cos(phase), std::sin(phase)));
  }
  return acc.value();
}

// ---- Poisson residual checks ------------------------------------------------------

namespace {

// nu-divisors of `sieve` coprime to r, with mu(nu)/nu attached
struct MobiusLayer {
  u64 nu;
  double weight;
};

std::vector<MobiusLayer> mobius_layers(u64 sieve, u64 r) {
  std::vector<MobiusLayer> out;
  for (u64 d = 1; d <= sieve; ++d) {
    if (sieve % d != 0 || std::gcd(d, r) != 1) continue;
    int mu = mobius(d);
    if (mu == 0) continue;
    out.push_back({d, static_cast<double>(mu) / static_cast<double>(d)});
  }
  return out;
}

// dual sum over e in Z of phase(e) * vhat(step * e), cut once |vhat| has
// stayed below 1e-12 of the leading term for a few indices running
cplx dual_sum(double step, const std::function<cplx(i64)>& term) {
  double floor = 1e-12 * std::abs(v_hat(0.0));
  KahanSum acc;
  acc.add(term(0) * v_hat(0.0));
  int quiet = 0;
  for (i64 e = 1; e <= 100000; ++e) {
    cplx vh = v_hat(step * static_cast<double>(e));
    acc.add(term(e) * vh);
    acc.add(term(-e) * std::conj(vh));  // V real, so vhat(-xi) = conj vhat(xi)
    quiet = (std::abs(vh) < floor) ? quiet + 1 : 0;
    if (quiet >= 3) break;
  }
  return acc.value();
}

void require_coprime(u64 a, u64 r, const char* what) {
  if (std::gcd(a, r) != 1)
    throw std::invalid_argument(std::string("poisson_residue_check: hypothesis (") + what +
                                ", r) = 1 violated");
}

}  // namespace

double poisson_residue_check(const PoissonConfig& cfg) {
  if (cfg.lemma < 1 || cfg.lemma > 3)
    throw std::invalid_argument("poisson_residue_check: lemma must be 1, 2, or 3");
  if (cfg.r == 0 || cfg.f == 0 || cfg.g == 0 || cfg.n == 0 || cfg.e == 0 || cfg.nu1 == 0 ||
      cfg.nu2 == 0 || cfg.sieve == 0)
    throw std::invalid_argument("poisson_residue_check: parameters must be positive");
  if (!(cfg.scale > 0.0) || cfg.scale > 1e6)
    throw std::invalid_argument("poisson_residue_check: scale out of range");

  const u64 r = cfg.r;
  const double sc = cfg.scale;
  // the window V(x/scale) is supported on scale*(1/2, 5/2)
  const i64 lo = static_cast<i64>(std::floor(sc * 0.5)) + 1;
  const i64 hi = static_cast<i64>(std::ceil(sc * 2.5)) - 1;

  if (cfg.lemma == 1) {
    // progression e = (fg)bar n mod r sieved by (e, sieve) = 1
    require_coprime(cfg.f, r, "f");
    require_coprime(cfg.g, r, "g");
    require_coprime(cfg.n, r, "n");
    u64 fg = cfg.f % r * (cfg.g % r) % r;
    u64 ebase = r == 1 ? 0 : mod_inverse(fg, r) * (cfg.n % r) % r;
    KahanSum lhs;
    for (i64 e = lo; e <= hi; ++e) {
      if (umod(e, r) != ebase) continue;
      if (std::gcd(static_cast<u64>(e), cfg.sieve) != 1) continue;
      lhs.add(cplx(v_bump(static_cast<double>(e) / sc), 0.0));
    }
    KahanSum rhs;
    for (const MobiusLayer& l : mobius_layers(cfg.sieve, r)) {
      u64 base = r == 1 ? 0 : cfg.n % r * mod_inverse(l.nu % r * fg % r, r) % r;
      cplx block = dual_sum(sc / (static_cast<double>(l.nu) * static_cast<double>(r)),
                            [&](i64 e) { return e_frac(static_cast<i64>(base) * e, r); });
      rhs.add(l.weight * block);
    }
    return std::abs(lhs.value() - (sc / static_cast<double>(r)) * rhs.value());
  }

  if (cfg.lemma == 2) {
    // inverse phase e(n e (nu1 f g)bar / r); dual side picks up S
    require_coprime(cfg.g, r, "g");
    require_coprime(cfg.nu1, r, "nu1");
    u64 ne = cfg.n % r * (cfg.e % r) % r;
    u64 g1 = cfg.nu1 % r * (cfg.g % r) % r;
    u64 b_arg = r == 1 ? 0 : ne * mod_inverse(g1, r) % r;  // n e (nu1 g)bar
    KahanSum lhs;
    for (i64 f = lo; f <= hi; ++f) {
      if (std::gcd(static_cast<u64>(f), cfg.sieve * r) != 1) continue;
      u64 phase = r == 1 ? 0 : ne * mod_inverse(g1 * umod(f, r) % r, r) % r;
      lhs.add(v_bump(static_cast<double>(f) / sc) * e_frac(static_cast<i64>(phase), r));
    }
    KahanSum rhs;
    for (const MobiusLayer& l : mobius_layers(cfg.sieve, r)) {
      u64 inv_nu = r == 1 ? 0 : mod_inverse(l.nu % r, r);
      cplx block =
          dual_sum(sc / (static_cast<double>(l.nu) * static_cast<double>(r)), [&](i64 f) {
            return kloosterman(static_cast<i64>(inv_nu) * f, static_cast<i64>(b_arg), r).value;
          });
      rhs.add(l.weight * block);
    }
    return std::abs(lhs.value() - (sc / static_cast<double>(r)) * rhs.value());
  }

  // lemma 3: Kloosterman layer; dual side picks up KS
  require_coprime(cfg.nu1, r, "nu1 nu2");
  require_coprime(cfg.nu2, r, "nu1 nu2");
  u64 ne = cfg.n % r * (cfg.e % r) % r;
  u64 a_arg = r == 1 ? 0 : mod_inverse(cfg.nu2 % r, r) * (cfg.f % r) % r;  // nu2bar f
  KahanSum lhs;
  for (i64 g = lo; g <= hi; ++g) {
    if (std::gcd(static_cast<u64>(g), cfg.sieve * r) != 1) continue;
    u64 b_arg = r == 1 ? 0 : ne * mod_inverse(cfg.nu1 % r * umod(g, r) % r, r) % r;
    lhs.add(v_bump(static_cast<double>(g) / sc) *
            kloosterman(static_cast<i64>(a_arg), static_cast<i64>(b_arg), r).value);
  }
  u64 h_arg = r == 1 ? 0 : mod_inverse(cfg.nu1 % r, r) * ne % r;  // nu1bar n e
  KahanSum rhs;
  for (const MobiusLayer& l : mobius_layers(cfg.sieve, r)) {
    u64 inv_nu = r == 1 ? 0 : mod_inverse(l.nu % r, r);
    cplx block = dual_sum(sc / (static_cast<double>(l.nu) * static_cast<double>(r)), [&](i64 g) {
      return hyper_kloosterman(static_cast<i64>(a_arg), static_cast<i64>(inv_nu) * g,
                               static_cast<i64>(h_arg), r)
          .value;
    });
    rhs.add(l.weight * block);
  }
  return std::abs(lhs.value() - (sc / static_cast<double>(r)) * rhs.value());
}

}  // namespace lmom
