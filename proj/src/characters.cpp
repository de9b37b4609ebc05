#include "lmom/characters.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lmom {

namespace {

u64 smallest_primitive_root(u64 p) {
  // p odd prime; test g^{(p-1)/l} != 1 for every prime l | p-1
  std::vector<u64> prime_divs;
  for (auto& [pp, ee] : factorize(p - 1).prime_powers) {
    (void)ee;
    prime_divs.push_back(pp);
  }
  for (u64 g = 2;; ++g) {
    bool ok = true;
    for (u64 ell : prime_divs)
      if (mod_pow(g, (p - 1) / ell, p) == 1) {
        ok = false;
        break;
      }
    if (ok) return g;
  }
}

struct Component {
  u64 pk = 1;  // p^e
  std::vector<u64> orders;
  // dlog[k][a mod pk] = exponent of generator k in a's decomposition, -1 off-units
  std::vector<std::vector<i64>> dlog;
};

Component build_component(u64 p, int e) {
  Component comp;
  comp.pk = 1;
  for (int i = 0; i < e; ++i) comp.pk *= p;
  const u64 pk = comp.pk;

  if (p == 2) {
    if (e == 1) return comp;  // (Z/2)^* trivial, no generators
    if (e == 2) {
      comp.orders = {2};
      comp.dlog = {std::vector<i64>(4, -1)};
      comp.dlog[0][1] = 0;
      comp.dlog[0][3] = 1;
      return comp;
    }
    // e >= 3: units are (-1)^x 5^y, x mod 2, y mod 2^{e-2}
    comp.orders = {2, pk / 4};
    comp.dlog = {std::vector<i64>(pk, -1), std::vector<i64>(pk, -1)};
    u64 y = 1;
    for (u64 j = 0; j < pk / 4; ++j) {
      comp.dlog[0][y] = 0;
      comp.dlog[1][y] = static_cast<i64>(j);
      comp.dlog[0][pk - y] = 1;
      comp.dlog[1][pk - y] = static_cast<i64>(j);
      y = y * 5 % pk;
    }
    return comp;
  }

  u64 g = smallest_primitive_root(p);
  if (e >= 2 && mod_pow(g, p - 1, p * p) == 1) g += p;  // lift to p^2, hence to p^e
  const u64 ord = pk / p * (p - 1);
  comp.orders = {ord};
  comp.dlog = {std::vector<i64>(pk, -1)};
  u64 x = 1;
  for (u64 j = 0; j < ord; ++j) {
    comp.dlog[0][x] = static_cast<i64>(j);
    x = x * g % pk;
  }
  return comp;
}

std::vector<u64> divisors_of(u64 q) {
  std::vector<u64> divs{1};
  for (auto& [p, e] : factorize(q).prime_powers) {
    const size_t base = divs.size();
    u64 pe = 1;
    for (int i = 1; i <= e; ++i) {
      pe *= p;
      for (size_t j = 0; j < base; ++j) divs.push_back(divs[j] * pe);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

u64 conductor_by_induction(const DirichletCharacter& chi, const std::vector<u64>& divs) {
  const u64 q = chi.modulus;
  for (u64 d : divs) {
    bool induced = true;
    for (u64 a = 1 + d; a <= q && induced; a += d)
      if (chi.phase_num[a % q] > 0) induced = false;  // unit with chi(a) != 1
    if (induced) return d;
  }
  return q;  // unreachable: d = q always passes
}

}  // namespace

std::vector<DirichletCharacter> enumerate_characters(u64 q) {
  if (q == 0) throw std::domain_error("enumerate_characters: q >= 1 required");

  std::vector<Component> comps;
  for (auto& [p, e] : factorize(q).prime_powers) comps.push_back(build_component(p, e));

  // flatten generators across components
  struct Gen {
    size_t comp;
    size_t k;
    u64 ord;
  };
  std::vector<Gen> gens;
  for (size_t ci = 0; ci < comps.size(); ++ci)
    for (size_t k = 0; k < comps[ci].orders.size(); ++k)
      gens.push_back({ci, k, comps[ci].orders[k]});

  u64 M = 1;
  for (auto& g : gens) M = std::lcm(M, g.ord);

  // per-residue discrete logs, shared by every character mod q
  std::vector<std::vector<i64>> alog(q, std::vector<i64>());
  for (u64 a = 0; a < q; ++a) {
    if (std::gcd(a, q) != 1) continue;
    std::vector<i64> d(gens.size());
    bool unit = true;
    for (size_t gi = 0; gi < gens.size(); ++gi) {
      const auto& comp = comps[gens[gi].comp];
      i64 dl = comp.dlog[gens[gi].k][a % comp.pk];
      if (dl < 0) {
        unit = false;
        break;
      }
      d[gi] = dl;
    }
    if (unit) alog[a] = std::move(d);
  }

  std::vector<cplx> root(M);
  for (u64 j = 0; j < M; ++j) root[j] = e_frac(static_cast<i64>(j), M);

  u64 total = 1;
  for (auto& g : gens) total *= g.ord;

  const auto divs = divisors_of(q);

  std::vector<DirichletCharacter> out;
  out.reserve(total);
  for (u64 idx = 0; idx < total; ++idx) {
    DirichletCharacter chi;
    chi.modulus = q;
    chi.phase_den = M;
    chi.component_exponents.resize(gens.size());
    chi.component_orders.resize(gens.size());
    // mixed radix, first generator slowest
    u64 rem = idx;
    for (size_t gi = gens.size(); gi-- > 0;) {
      chi.component_exponents[gi] = static_cast<int>(rem % gens[gi].ord);
      chi.component_orders[gi] = gens[gi].ord;
      rem /= gens[gi].ord;
    }
    chi.phase_num.assign(q, -1);
    chi.value_table.assign(q, cplx(0.0));
    for (u64 a = 0; a < q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      u64 phase = 0;
      for (size_t gi = 0; gi < gens.size(); ++gi)
        phase = (phase + static_cast<u64>(chi.component_exponents[gi]) *
                             static_cast<u64>(alog[a][gi]) % M * (M / gens[gi].ord)) % M;
      chi.phase_num[a] = static_cast<i64>(phase);
      chi.value_table[a] = root[phase];
    }
    chi.even = (chi.phase_num[(q - 1) % q] == 0);
    chi.conductor = conductor_by_induction(chi, divs);
    out.push_back(std::move(chi));
  }
  return out;
}

u64 conductor(const DirichletCharacter& chi) { return chi.conductor; }

DirichletCharacter conjugate_character(const DirichletCharacter& chi) {
  DirichletCharacter bar = chi;
  for (size_t gi = 0; gi < bar.component_exponents.size(); ++gi) {
    const u64 ord = bar.component_orders[gi];
    bar.component_exponents[gi] =
        static_cast<int>((ord - static_cast<u64>(chi.component_exponents[gi])) % ord);
  }
  const i64 M = static_cast<i64>(chi.phase_den);
  for (u64 a = 0; a < chi.modulus; ++a) {
    if (chi.phase_num[a] < 0) continue;
    bar.phase_num[a] = (M - chi.phase_num[a]) % M;
    bar.value_table[a] = std::conj(chi.value_table[a]);
  }
  return bar;
}

u64 count_primitive_even(u64 q) {
  if (q == 0) throw std::domain_error("count_primitive_even: q >= 1 required");
  i64 acc = 0;
  for (u64 r : divisors_of(q)) {
    const int mu = mobius(q / r);
    if (mu == 0) continue;
    acc += static_cast<i64>(mu) * static_cast<i64>(euler_phi(r));  // all-characters part
    if (r <= 2) acc += mu;  // r | 2 part, phi(1) = phi(2) = 1
  }
  if (acc < 0 || acc % 2 != 0)
    throw std::logic_error("count_primitive_even: divisor sum not a nonnegative even integer");
  return static_cast<u64>(acc) / 2;
}

GaussSumResult gauss_sum(const DirichletCharacter& chi) {
  const u64 q = chi.modulus;
  KahanSum sum;
  for (u64 a = 1; a <= q; ++a) {
    const cplx v = chi.value_table[a % q];
    if (v != cplx(0.0)) sum.add(v * e_frac(static_cast<i64>(a), q));
  }
  return {sum.value(), std::sqrt(static_cast<double>(q))};
}

std::pair<cplx, cplx> orthogonality_sides(u64 q, u64 m, u64 n) {
  if (std::gcd(m * n, q) != 1)
    throw std::domain_error("orthogonality_sides: (mn, q) = 1 required");

  KahanSum lhs;
  for (const auto& chi : enumerate_characters(q)) {
    if (!chi.is_primitive() || !chi.even) continue;
    lhs.add(chi.value(m) * std::conj(chi.value(n)));
  }

  const u64 diff = (m >= n) ? m - n : n - m;
  i64 rhs = 0;
  for (u64 r : divisors_of(q)) {
    const int mu = mobius(q / r);
    if (mu == 0) continue;
    int hits = 0;
    if ((m + n) % r == 0) ++hits;
    if (diff % r == 0) ++hits;  // r | 0 in particular when m = n
    rhs += static_cast<i64>(mu) * static_cast<i64>(euler_phi(r)) * hits;
  }
  return {lhs.value(), cplx(static_cast<double>(rhs) / 2.0)};
}

}  // namespace lmom
