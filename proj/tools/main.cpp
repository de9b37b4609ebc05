// Command-line front end.  Subcommands map one-to-one onto the library
// modules; everything numerical happens in liblmom, this file only parses
// arguments, formats CSV/JSON, and fixes the exit-code contract:
//
//   0  success
//   1  validation error (bad arguments, malformed shift file, rejected config)
//   2  a verify suite ran and a numerical tolerance failed
//
// Reports are byte-identical across runs and thread counts: CSV headers echo
// the configuration, verify suites draw from fixed seeds, and runtimes appear
// only in the JSON summaries, never inside report files.

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lmom/characters.hpp"
#include "lmom/expsums.hpp"
#include "lmom/lvalues.hpp"
#include "lmom/mainterm.hpp"
#include "lmom/moments.hpp"
#include "lmom/shifts.hpp"
#include "lmom/weights.hpp"

using json = nlohmann::json;
using namespace lmom;

namespace {

// ---- small formatting helpers ----------------------------------------------

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

int write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "cannot open " << path << " for writing\n";
    return 1;
  }
  out << text;
  return 0;
}

// ---- shift file parsing ------------------------------------------------------
// Six lines "re im" in the order a1 a2 a3 b1 b2 b3; blank lines and lines
// starting with '#' are skipped.

Shifts load_shifts(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("shift file: cannot open " + path);
  std::vector<cplx> vals;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string first;
    if (!(ss >> first) || first[0] == '#') continue;
    double re = 0.0, im = 0.0;
    std::string rest;
    std::size_t used = 0;
    try {
      re = std::stod(first, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != first.size() || !(ss >> im) || (ss >> rest))
      throw std::invalid_argument("shift file: line " + std::to_string(lineno) +
                                  ": expected 're im'");
    vals.push_back(cplx(re, im));
  }
  if (vals.size() != 6)
    throw std::invalid_argument("shift file: expected 6 shifts, found " +
                                std::to_string(vals.size()));
  Shifts t;
  for (int j = 0; j < 3; ++j) {
    t.alpha[j] = vals[j];
    t.beta[j] = vals[j + 3];
  }
  return t;
}

cplx parse_complex(const std::string& s) {
  std::size_t comma = s.find(',');
  std::size_t used = 0;
  double re = std::stod(s.substr(0, comma), &used);
  if (used != (comma == std::string::npos ? s.size() : comma))
    throw std::invalid_argument("cannot parse complex number '" + s + "'");
  double im = 0.0;
  if (comma != std::string::npos) {
    im = std::stod(s.substr(comma + 1), &used);
    if (used != s.size() - comma - 1)
      throw std::invalid_argument("cannot parse complex number '" + s + "'");
  }
  return {re, im};
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::istringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  if (out.empty()) throw std::invalid_argument("empty grid axis");
  return out;
}

// ---- subcommand bodies -------------------------------------------------------

int run_characters(u64 q, const std::string& out_path) {
  std::string csv = "# lmom 1.0.0\n# characters q=" + std::to_string(q) +
                    "\n# columns: index, conductor, parity, a, Re chi(a), Im chi(a)\n";
  const auto chars = enumerate_characters(q);
  for (std::size_t i = 0; i < chars.size(); ++i) {
    const DirichletCharacter& chi = chars[i];
    for (u64 a = 0; a < q; ++a) {
      cplx v = chi.value(a);
      csv += std::to_string(i) + ", " + std::to_string(chi.conductor) + ", " +
             (chi.even ? "1" : "-1") + ", " + std::to_string(a) + ", " + g17(v.real()) + ", " +
             g17(v.imag()) + "\n";
    }
  }
  return write_text(out_path, csv);
}

int run_lvalue(u64 q, u64 index, const std::string& s_text) {
  const cplx s = parse_complex(s_text);
  const auto chars = enumerate_characters(q);
  if (index >= chars.size())
    throw std::invalid_argument("index " + std::to_string(index) + " out of range: q=" +
                                std::to_string(q) + " has " + std::to_string(chars.size()) +
                                " characters");
  const DirichletCharacter& chi = chars[index];
  json out;
  out["q"] = q;
  out["index"] = index;
  out["conductor"] = chi.conductor;
  out["even"] = chi.even;
  out["primitive"] = chi.is_primitive();
  out["s"] = cplx_json(s);
  out["L"] = cplx_json(l_value(chi, s));
  if (chi.is_primitive() && chi.even) {
    const CompletedLValue lam = completed_lambda(chi, s - cplx(0.5, 0.0));
    out["Lambda"] = cplx_json(lam.value);
    out["gamma_factor"] = cplx_json(lam.gamma_factor);
    out["epsilon"] = cplx_json(root_number(chi));
  } else {
    out["Lambda"] = nullptr;
    out["gamma_factor"] = nullptr;
    out["epsilon"] = nullptr;
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int run_weights(const std::string& shift_path, const std::string& grid, double contour_re,
                const std::string& out_path) {
  const Shifts t = load_shifts(shift_path);
  std::vector<std::string> axes;
  std::istringstream ss(grid);
  std::string part;
  while (std::getline(ss, part, ';')) axes.push_back(part);
  if (axes.size() != 3)
    throw std::invalid_argument("--grid wants 'xi-list;eta-list;mu-list', e.g. '1,2;1;40,80'");
  const std::vector<double> xis = parse_list(axes[0]);
  const std::vector<double> etas = parse_list(axes[1]);
  const std::vector<double> mus = parse_list(axes[2]);

  ContourSpec contour;
  contour.real_part = contour_re;
  std::string csv = "# lmom 1.0.0\n# weights grid=" + grid + " contour=" + g17(contour_re) +
                    "\n# columns: xi, eta, mu, Re W, Im W, remainder\n";
  for (double xi : xis)
    for (double eta : etas)
      for (double mu : mus) {
        const WeightEvaluation w = w_weight(xi, eta, mu, t, contour);
        csv += g17(xi) + ", " + g17(eta) + ", " + g17(mu) + ", " + g17(w.value.real()) + ", " +
               g17(w.value.imag()) + ", " + g17(w.truncation_remainder) + "\n";
      }
  return write_text(out_path, csv);
}

int run_mainterm(u64 big_q, const std::string& shift_path, const std::string& out_path) {
  const Shifts t = load_shifts(shift_path);
  if (t.max_magnitude() == 0.0)
    throw std::invalid_argument(
        "mainterm: the exchange sum has poles at coincident shifts; give six distinct ones");
  std::string csv = "# lmom 1.0.0\n# mainterm Q=" + std::to_string(big_q) + "\n# shifts:";
  for (int j = 0; j < 6; ++j) {
    cplx v = j < 3 ? t.alpha[j] : t.beta[j - 3];
    csv += " " + g17(v.real()) + "," + g17(v.imag());
  }
  csv += "\n# columns: q, phi_flat, Re Qtilde, Im Qtilde\n";
  for (u64 q = 1; q <= big_q; ++q) {
    const cplx qt = q_tilde(q, t);
    csv += std::to_string(q) + ", " + std::to_string(count_primitive_even(q)) + ", " +
           g17(qt.real()) + ", " + g17(qt.imag()) + "\n";
  }
  return write_text(out_path, csv);
}

int run_moment(u64 big_q, const std::string& shift_text, const std::string& weight,
               const std::string& method, u64 truncation, int threads,
               const std::string& out_path) {
  MomentConfig cfg;
  cfg.big_q = big_q;
  if (shift_text != "zero") cfg.shifts = load_shifts(shift_text);
  cfg.weight = weight == "sharp" ? CutoffMode::sharp : CutoffMode::smooth;
  cfg.method = method == "afe"    ? MomentMethod::afe
               : method == "both" ? MomentMethod::both
                                  : MomentMethod::hurwitz;
  cfg.afe_truncation = truncation;
  cfg.thread_hint = threads;

  const MomentReport rep = moment_report(cfg);
  const std::string csv = report_csv(rep, cfg);

  json summary;
  summary["Q"] = big_q;
  summary["weight"] = weight;
  summary["method"] = method;
  summary["rows"] = rep.per_q.size();
  summary["empirical"] = cplx_json(rep.empirical_total);
  summary["predicted"] = cplx_json(rep.predicted_total);
  if (cfg.method != MomentMethod::hurwitz) summary["afe"] = cplx_json(rep.afe_total);
  summary["ratio"] = cplx_json(rep.ratio);
  summary["runtime_seconds"] = rep.runtime_seconds;

  // CSV is the durable report; the summary (which carries a runtime) goes to
  // whichever stream the report does not occupy
  if (int rc = write_text(out_path, csv); rc != 0) return rc;
  (out_path.empty() ? std::cerr : std::cout) << summary.dump(2) << "\n";
  return 0;
}

int run_expsum_value(const std::string& kind, i64 a, i64 b, i64 h, u64 modulus) {
  json out;
  ExpSumValue v{};
  if (kind == "kloosterman") {
    v = kloosterman(a, b, modulus);
    out["a"] = a;
    out["b"] = b;
  } else if (kind == "hyper") {
    v = hyper_kloosterman(a, b, h, modulus);
    out["f"] = a;
    out["g"] = b;
    out["h"] = h;
  } else {
    v = ramanujan_sum(modulus, a);
    out["n"] = a;
  }
  out["modulus"] = v.modulus;
  out["value"] = cplx_json(v.value);
  out["method"] = v.method == SumMethod::closed_form ? "closed_form" : "direct";
  std::cout << out.dump(2) << "\n";
  return 0;
}

// ---- verify suites -----------------------------------------------------------
// Each suite prints one row per block with its worst deviation and returns 2
// if any tolerance fails.  Random draws use fixed seeds so two runs of the
// same binary print identical tables.

struct SuiteTable {
  bool ok = true;
  void row(const std::string& label, double worst, double tol) {
    const bool pass = worst <= tol;
    ok = ok && pass;
    std::printf("%-28s worst %.3e  tol %.0e  %s\n", label.c_str(), worst, tol,
                pass ? "pass" : "FAIL");
  }
  int finish() const {
    std::printf("%s\n", ok ? "all checks passed" : "TOLERANCE FAILURES");
    return ok ? 0 : 2;
  }
};

int verify_orthogonality() {
  SuiteTable table;
  for (u64 q0 = 1; q0 <= 60; q0 += 20) {
    double worst = 0.0;
    for (u64 q = q0; q < q0 + 20 && q <= 60; ++q)
      for (u64 m = 1; m <= 40; ++m)
        for (u64 n = 1; n <= 40; ++n) {
          if (std::gcd(m * n, q) != 1) continue;
          const auto [lhs, rhs] = orthogonality_sides(q, m, n);
          worst = std::max(worst, std::abs(lhs - rhs));
        }
    table.row("q in [" + std::to_string(q0) + "," + std::to_string(std::min<u64>(q0 + 19, 60)) +
                  "]",
              worst, 1e-9);
  }
  return table.finish();
}

int verify_weil() {
  SuiteTable table;
  const auto primes = small_primes();
  // no prime in (499, 500], so these blocks cover every p <= 500
  for (u64 lo = 2; lo <= 400; lo = lo == 2 ? 100 : lo + 100) {
    const u64 hi = lo == 2 ? 100 : lo + 100;
    double worst = -1e300;  // max |S| - 2 sqrt p over the block
    for (u32 p : primes) {
      if (p < lo || p >= hi) continue;
      // S(a, b; p) = S(1, ab; p): one table of p values covers every pair
      std::vector<double> mag(p);
      for (u64 m = 0; m < p; ++m) mag[m] = std::abs(kloosterman(1, static_cast<i64>(m), p).value);
      const double bound = 2.0 * std::sqrt(static_cast<double>(p));
      for (u64 a = 1; a < p; ++a)
        for (u64 b = 1; b < p; ++b) worst = std::max(worst, mag[a * b % p] - bound);
    }
    table.row("p in [" + std::to_string(lo) + "," + std::to_string(hi - 1) + "]", worst, 1e-9);
  }
  return table.finish();
}

int verify_deligne() {
  SuiteTable table;
  std::mt19937_64 rng(811);
  const auto primes = small_primes();
  double worst = -1.0;  // max |KS|/3p, tol 1 + 1e-12
  for (u32 p : primes) {
    if (p > 200) break;
    std::uniform_int_distribution<u64> unit(1, p - 1);
    for (int trial = 0; trial < 20; ++trial) {
      const i64 f = static_cast<i64>(unit(rng)), g = static_cast<i64>(unit(rng)),
                h = static_cast<i64>(unit(rng));
      worst = std::max(worst, std::abs(hyper_kloosterman(f, g, h, p).value) / (3.0 * p));
    }
  }
  table.row("20 triples per p <= 200", worst, 1.0 + 1e-12);
  return table.finish();
}

int verify_ramanujan() {
  SuiteTable table;
  double worst = 0.0;
  for (u64 r = 1; r <= 300; ++r) {
    // direct unit sum, independent of the closed form under test
    std::vector<u64> units;
    for (u64 a = 0; a < r; ++a)
      if (std::gcd(a == 0 ? r : a, r) == 1) units.push_back(a);
    if (r == 1) units.assign(1, 0);
    for (i64 n = -300; n <= 300; ++n) {
      KahanSum direct;
      for (u64 a : units) direct.add(e_frac(static_cast<i64>(a) * n, r));
      worst = std::max(worst, std::abs(ramanujan_sum(r, n).value - direct.value()));
    }
  }
  table.row("r <= 300, |n| <= 300", worst, 1e-9);
  return table.finish();
}

int verify_poisson() {
  SuiteTable table;
  std::mt19937_64 rng(812);
  const u64 moduli[] = {3, 5, 7, 9, 11, 13};
  for (int lemma = 1; lemma <= 3; ++lemma) {
    double worst = 0.0;
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
    table.row("lemma " + std::to_string(lemma) + ", 30 draws", worst, 1e-6);
  }
  return table.finish();
}

int run_verify(const std::string& suite) {
  if (suite == "orthogonality") return verify_orthogonality();
  if (suite == "weil") return verify_weil();
  if (suite == "deligne") return verify_deligne();
  if (suite == "ramanujan") return verify_ramanujan();
  if (suite == "poisson") return verify_poisson();
  throw std::invalid_argument("unknown suite " + suite);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sixth-moment toolkit for Dirichlet L-functions"};
  app.require_subcommand(1);

  // characters
  auto* c_cmd = app.add_subcommand("characters", "dump a modulus's character table as CSV");
  u64 c_q = 5;
  std::string c_out;
  c_cmd->add_option("--q", c_q, "modulus")->required()->check(CLI::PositiveNumber);
  c_cmd->add_option("--out", c_out, "output file (default stdout)");

  // lvalue
  auto* l_cmd = app.add_subcommand("lvalue", "evaluate one L-value as JSON");
  u64 l_q = 5, l_index = 0;
  std::string l_s = "0.5";
  l_cmd->add_option("--q", l_q, "modulus")->required()->check(CLI::PositiveNumber);
  l_cmd->add_option("--index", l_index, "character index in enumeration order")->required();
  l_cmd->add_option("--s", l_s, "evaluation point 're' or 're,im'")->required();

  // weights
  auto* w_cmd = app.add_subcommand("weights", "evaluate the two-variable cutoff on a grid");
  std::string w_shifts, w_grid, w_out;
  double w_contour = 1.0;
  w_cmd->add_option("--shifts", w_shifts, "shift file")->required();
  w_cmd->add_option("--grid", w_grid, "'xi-list;eta-list;mu-list', comma-separated lists")
      ->required();
  w_cmd->add_option("--contour", w_contour, "requested contour abscissa");
  w_cmd->add_option("--out", w_out, "output file (default stdout)");

  // mainterm
  auto* m_cmd = app.add_subcommand("mainterm", "per-modulus exchange-sum prediction rows");
  u64 m_q = 40;
  std::string m_shifts, m_out;
  m_cmd->add_option("--Q", m_q, "largest modulus")->required()->check(CLI::PositiveNumber);
  m_cmd->add_option("--shifts", m_shifts, "shift file")->required();
  m_cmd->add_option("--out", m_out, "output file (default stdout)");

  // expsums
  auto* e_cmd = app.add_subcommand("expsums", "exponential sums and their verifications");
  e_cmd->require_subcommand(1);
  i64 e_a = 1, e_b = 1, e_h = 1;
  u64 e_mod = 5;
  auto* ek = e_cmd->add_subcommand("kloosterman", "S(a, b; c)");
  ek->add_option("--a", e_a)->required();
  ek->add_option("--b", e_b)->required();
  ek->add_option("--c", e_mod, "modulus")->required()->check(CLI::PositiveNumber);
  auto* eh = e_cmd->add_subcommand("hyper", "KS(f, g, h; r)");
  eh->set_help_flag("--help", "print help");  // frees -h for the third argument
  eh->add_option("--f", e_a)->required();
  eh->add_option("--g", e_b)->required();
  eh->add_option("--h", e_h)->required();
  eh->add_option("--r", e_mod, "modulus")->required()->check(CLI::PositiveNumber);
  auto* er = e_cmd->add_subcommand("ramanujan", "r_r(n)");
  er->add_option("--n", e_a)->required();
  er->add_option("--r", e_mod, "modulus")->required()->check(CLI::PositiveNumber);
  std::string ev_suite;
  auto* ev = e_cmd->add_subcommand("verify", "exponential-sum bound suites");
  ev->add_option("--suite", ev_suite, "weil | deligne | poisson")
      ->required()
      ->check(CLI::IsMember({"weil", "deligne", "poisson"}));

  // moment
  auto* mo_cmd = app.add_subcommand("moment", "family sixth-moment report");
  u64 mo_q = 20, mo_trunc = 4'000'000;
  std::string mo_shifts, mo_weight = "smooth", mo_method = "hurwitz", mo_out;
  int mo_threads = 1;
  mo_cmd->add_option("--Q", mo_q, "family size parameter")->required()->check(CLI::PositiveNumber);
  mo_cmd->add_option("--shifts", mo_shifts, "shift file, or 'zero'")->required();
  mo_cmd->add_option("--weight", mo_weight, "cutoff mode")
      ->check(CLI::IsMember({"smooth", "sharp"}));
  mo_cmd->add_option("--method", mo_method, "evaluation route")
      ->check(CLI::IsMember({"hurwitz", "afe", "both"}));
  mo_cmd->add_option("--truncation", mo_trunc, "afe coefficient-sum cap");
  mo_cmd->add_option("--threads", mo_threads, "worker count (LMOM_THREADS overrides)")
      ->check(CLI::PositiveNumber);
  mo_cmd->add_option("--out", mo_out, "report file; summary JSON then goes to stdout");

  // verify
  auto* v_cmd = app.add_subcommand("verify", "cross-module verification suites");
  std::string v_suite;
  v_cmd->add_option("--suite", v_suite, "orthogonality | weil | deligne | ramanujan | poisson")
      ->required()
      ->check(CLI::IsMember({"orthogonality", "weil", "deligne", "ramanujan", "poisson"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (c_cmd->parsed()) return run_characters(c_q, c_out);
    if (l_cmd->parsed()) return run_lvalue(l_q, l_index, l_s);
    if (w_cmd->parsed()) return run_weights(w_shifts, w_grid, w_contour, w_out);
    if (m_cmd->parsed()) return run_mainterm(m_q, m_shifts, m_out);
    if (e_cmd->parsed()) {
      if (ek->parsed()) return run_expsum_value("kloosterman", e_a, e_b, e_h, e_mod);
      if (eh->parsed()) return run_expsum_value("hyper", e_a, e_b, e_h, e_mod);
      if (er->parsed()) return run_expsum_value("ramanujan", e_a, e_b, e_h, e_mod);
      if (ev->parsed()) return run_verify(ev_suite);
    }
    if (mo_cmd->parsed())
      return run_moment(mo_q, mo_shifts, mo_weight, mo_method, mo_trunc, mo_threads, mo_out);
    if (v_cmd->parsed()) return run_verify(v_suite);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
