// trigen: command-line front end for the triangle-generation toolkit.
//
// Subcommands: classify, tables, cyclo (theta|delta), certificate, census,
// verify, classdim. Output formats: plain (default), --json, and --csv where
// tabular. Every run embeds the build version and the seed; identical
// (command, seed, caps) invocations produce byte-identical output. The
// RIGIDITY_SEED environment variable overrides --seed.
//
// Exit codes: 0 success; 1 property violation or internal check failure;
// 2 invalid arguments; 3 resource cap exceeded (including a census whose
// budget ran out without a witness — a truncated search must not read as
// "not generated").

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "trigen/certificate.hpp"
#include "trigen/cyclo.hpp"
#include "trigen/errors.hpp"
#include "trigen/fieldpoly.hpp"
#include "trigen/matsp.hpp"
#include "trigen/rigidity.hpp"
#include "trigen/traceid.hpp"
#include "trigen/version.hpp"

using nlohmann::ordered_json;
using namespace trigen;

namespace {

// ---- shared plumbing ----

struct Common {
  uint64_t seed = 0;
  bool json = false;
  bool csv = false;
  int threads = 1;
};

void add_common(CLI::App* sub, Common& c, bool with_csv) {
  sub->add_option("--seed", c.seed, "random seed; env RIGIDITY_SEED overrides");
  sub->add_flag("--json", c.json, "JSON output");
  if (with_csv) sub->add_flag("--csv", c.csv, "CSV output");
  sub->add_option("--threads", c.threads,
                  "worker pool size (reserved; campaigns currently run on one thread)")
      ->check(CLI::PositiveNumber);
}

// Applies the RIGIDITY_SEED override; returns false (bad value) to exit 2.
bool apply_seed_env(Common& c) {
  const char* env = std::getenv("RIGIDITY_SEED");
  if (env == nullptr || *env == '\0') return true;
  char* end = nullptr;
  unsigned long long v = std::strtoull(env, &end, 10);
  if (end == nullptr || *end != '\0') {
    std::cerr << "trigen: RIGIDITY_SEED is not an unsigned integer: " << env << "\n";
    return false;
  }
  c.seed = v;
  return true;
}

std::string plain_header(uint64_t seed) {
  return std::string("# trigen ") + kVersion + " seed=" + std::to_string(seed);
}

ordered_json json_header(const char* cmd, uint64_t seed) {
  ordered_json j;
  j["schema"] = "v1";
  j["version"] = kVersion;
  j["command"] = cmd;
  j["seed"] = seed;
  return j;
}

void emit_json(const ordered_json& j) { std::cout << j.dump(2) << "\n"; }

std::vector<long> parse_triple(const std::string& s) {
  std::vector<long> out;
  size_t pos = 0;
  while (pos <= s.size()) {
    size_t comma = s.find(',', pos);
    std::string tok = s.substr(pos, comma == std::string::npos ? std::string::npos
                                                               : comma - pos);
    if (tok.empty()) throw std::invalid_argument("triple: empty component in '" + s + "'");
    out.push_back(std::stol(tok));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.size() != 3)
    throw std::invalid_argument("triple: expected three comma-separated integers, got '" +
                                s + "'");
  return out;
}

std::vector<long> parse_longs(const std::string& s, const char* what) {
  std::vector<long> out;
  size_t pos = 0;
  while (pos <= s.size()) {
    size_t comma = s.find(',', pos);
    std::string tok = s.substr(pos, comma == std::string::npos ? std::string::npos
                                                               : comma - pos);
    if (tok.empty())
      throw std::invalid_argument(std::string(what) + ": empty component in '" + s + "'");
    out.push_back(std::stol(tok));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

// Validates q = p^m for a prime p; returns (p, m).
std::pair<uint64_t, uint32_t> prime_power(uint64_t q) {
  if (q < 2) throw std::invalid_argument("q must be a prime power >= 2");
  uint64_t p = q;
  for (uint64_t d = 2; d * d <= q; ++d)
    if (q % d == 0) {
      p = d;
      break;
    }
  uint32_t m = 0;
  uint64_t rest = q;
  while (rest % p == 0) {
    rest /= p;
    ++m;
  }
  if (rest != 1)
    throw std::invalid_argument("q = " + std::to_string(q) + " is not a prime power");
  return {p, m};
}

ordered_json field_json(const FieldCtx& k) {
  ordered_json j;
  j["p"] = k.p;
  j["m"] = k.m;
  j["modulus"] = k.modulus;  // empty for prime fields
  return j;
}

ordered_json mat_json(const Mat4& g) {
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < 4; ++i) {
    ordered_json row = ordered_json::array();
    for (int j = 0; j < 4; ++j) row.push_back(g.at(i, j).rep());
    rows.push_back(row);
  }
  ordered_json j = field_json(g.ctx());
  j["rows"] = rows;
  return j;
}

// Compact single-token matrix encoding for CSV: rows joined by '|',
// entries by ';', limbs by ':'.
std::string mat_compact(const Mat4& g) {
  std::string out;
  for (int i = 0; i < 4; ++i) {
    if (i) out += '|';
    for (int j = 0; j < 4; ++j) {
      if (j) out += ';';
      FieldElement e = g.at(i, j);
      for (size_t l = 0; l < e.rep().size(); ++l) {
        if (l) out += ':';
        out += std::to_string(e.rep()[l]);
      }
    }
  }
  return out;
}

ordered_json intpoly_json(const IntPoly& f) {
  // Decimal coefficient strings, constant term first.
  ordered_json arr = ordered_json::array();
  for (const mpz_class& c : f.coeffs()) arr.push_back(c.get_str());
  return arr;
}

std::string join_longs(const std::vector<long>& v, const char* sep) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(v[i]);
  }
  return out;
}

// ---- classify ----

struct ClassifyArgs {
  Common common;
  std::string family = "A";
  long rank = 1;
  std::string triple;
  std::string isogeny = "adjoint";
  long characteristic = 0;
};

int run_classify(const ClassifyArgs& a) {
  std::optional<Family> fam = family_from_string(a.family);
  if (!fam) {
    std::cerr << "trigen classify: unknown family '" << a.family
              << "' (use A, B, C, D, G2, F4, E6, E7, E8)\n";
    return 2;
  }
  std::optional<Isogeny> iso = isogeny_from_string(a.isogeny);
  if (!iso) {
    std::cerr << "trigen classify: unknown isogeny class '" << a.isogeny
              << "' (use adjoint, sc, other)\n";
    return 2;
  }
  std::vector<long> t3 = parse_triple(a.triple);
  Triple t(t3[0], t3[1], t3[2]);
  GroupDescriptor g = make_group(*fam, a.rank, *iso);
  if (!t.hyperbolic()) {
    std::cerr << "trigen classify: rejected, triple " << t.str()
              << " is not hyperbolic (needs 1/a + 1/b + 1/c < 1)\n";
    return 2;
  }

  std::optional<TableHit> hit = table_lookup(g, t, a.characteristic);
  bool formula = (*fam == Family::A && *iso == Isogeny::Adjoint);
  std::optional<TripleVerdict> tv;
  if (formula) tv = classify_adjoint_A(a.rank, t);
  std::vector<long> open = open_primes(g, t);

  Verdict verdict = tv ? tv->verdict : (hit ? hit->verdict : Verdict::Nonrigid);
  if (!tv && !hit) {
    std::cerr << "trigen classify: no classification is tabulated for isogeny class '"
              << a.isogeny << "' of " << g.label() << "\n";
    return 2;
  }

  if (a.common.json) {
    ordered_json j = json_header("classify", a.common.seed);
    j["group"] = g.label();
    j["family"] = to_string(g.family);
    j["rank"] = g.rank;
    j["isogeny"] = to_string(g.isogeny);
    j["triple"] = std::vector<long>{t.a(), t.b(), t.c()};
    j["characteristic"] = a.characteristic;
    j["verdict"] = to_string(verdict);
    if (tv) {
      j["S"] = tv->S;
      j["D"] = tv->D;
      j["du"] = std::vector<long>{du_type_A(a.rank, t.a()), du_type_A(a.rank, t.b()),
                                  du_type_A(a.rank, t.c())};
    }
    if (hit) j["provenance"] = hit->provenance;
    j["open_primes"] = open;
    emit_json(j);
  } else {
    std::cout << plain_header(a.common.seed) << "\n";
    std::cout << "group: " << g.label() << "  [" << to_string(g.family) << "_" << g.rank
              << ", " << to_string(g.isogeny) << ", dim " << g.dim << ", h "
              << g.coxeter_h << "]\n";
    std::cout << "triple: " << t.str() << "\n";
    std::cout << "characteristic: "
              << (a.characteristic == 0 ? std::string("generic (0)")
                                        : std::to_string(a.characteristic))
              << "\n";
    std::cout << "verdict: " << to_string(verdict) << "\n";
    if (tv) {
      std::cout << "S = " << tv->S << "  D = " << tv->D << "\n";
      std::cout << "d_u: d_" << t.a() << " = " << du_type_A(a.rank, t.a()) << ", d_"
                << t.b() << " = " << du_type_A(a.rank, t.b()) << ", d_" << t.c() << " = "
                << du_type_A(a.rank, t.c()) << "\n";
    }
    if (hit) std::cout << "provenance: " << hit->provenance << "\n";
    std::cout << "open primes: " << join_longs(open, ", ")
              << "  (characteristics not settled by the generic statement)\n";
  }
  return 0;
}

// ---- tables ----

struct TablesArgs {
  Common common;
  int which = 1;
};

int run_tables(const TablesArgs& a) {
  const std::vector<TableRow>& rows = table_rows(a.which);
  if (a.common.json) {
    ordered_json j = json_header("tables", a.common.seed);
    j["which"] = a.which;
    ordered_json arr = ordered_json::array();
    for (const TableRow& r : rows) {
      ordered_json row;
      row["group"] = r.group_label;
      row["p"] = r.p_label;
      row["pattern"] = r.pattern_label;
      row["provenance"] = r.provenance;
      arr.push_back(row);
    }
    j["rows"] = arr;
    emit_json(j);
  } else if (a.common.csv) {
    std::cout << plain_header(a.common.seed) << "\n";
    std::cout << "group,p,pattern\n";
    for (const TableRow& r : rows)
      std::cout << r.group_label << "," << r.p_label << ",\"" << r.pattern_label
                << "\"\n";
  } else {
    std::cout << plain_header(a.common.seed) << "\n";
    std::cout << "table " << a.which << " (" << rows.size() << " rows)\n";
    for (const TableRow& r : rows)
      std::cout << "  " << r.group_label << "  p " << r.p_label << "  " << r.pattern_label
                << "\n";
  }
  return 0;
}

// ---- cyclo ----

struct CycloArgs {
  Common common;
  long c = 1;
  bool is_theta = true;
};

int run_cyclo(const CycloArgs& a) {
  IntPoly f = a.is_theta ? theta(a.c) : delta(a.c);
  const char* kind = a.is_theta ? "theta" : "delta";
  if (a.common.json) {
    ordered_json j = json_header("cyclo", a.common.seed);
    j["kind"] = kind;
    j["c"] = a.c;
    j["degree"] = f.degree();
    j["coefficients"] = intpoly_json(f);
    emit_json(j);
  } else {
    std::cout << plain_header(a.common.seed) << "\n";
    std::cout << (a.is_theta ? "Theta" : "Delta") << "_" << a.c << " = " << f.str()
              << "\n";
  }
  return 0;
}

// ---- certificate ----

struct CertArgs {
  Common common;
  long p = 2;
  long c = 1;
  bool psp = false;
  long degree_cap = kCertDegreeCap;
  long conductor_cap = kCertConductorCap;
};

int run_certificate(const CertArgs& a) {
  if (a.psp && a.p == 2) {
    std::cerr << "trigen certificate: --psp needs an odd prime; PSp_4(2^r) and "
                 "Sp_4(2^r) coincide, use the plain certificate\n";
    return 2;
  }
  long c_eff = a.psp ? 2 * a.c : a.c;
  Certificate cert =
      build_certificate(a.p, c_eff, a.common.seed, a.degree_cap, a.conductor_cap);
  long bound = certified_bound(cert);
  if (a.psp && bound != psp_bound(a.p, a.c, a.common.seed, a.degree_cap, a.conductor_cap))
    throw std::logic_error("certificate: psp_bound disagrees with the built certificate");

  if (a.common.json) {
    ordered_json j = json_header("certificate", a.common.seed);
    j["p"] = cert.p;
    j["c"] = a.c;
    j["psp"] = a.psp;
    if (a.psp) j["effective_c"] = c_eff;
    j["candidate_rs"] = cert.candidate_rs;
    j["max_r"] = cert.max_r;
    if (a.psp) j["psp_bound"] = bound;
    ordered_json pts = ordered_json::array();
    for (const CertPoint& pt : cert.points) {
      ordered_json pj;
      pj["x"] = pt.x.rep();
      pj["y"] = pt.y.rep();
      pj["z"] = pt.z.rep();
      pj["r"] = pt.r;
      pj["field_degree"] = pt.x.ctx().m;
      pts.push_back(pj);
    }
    j["points"] = pts;
    ordered_json fields = ordered_json::array();
    for (const auto& k : cert.fields) fields.push_back(field_json(*k));
    j["fields"] = fields;
    emit_json(j);
  } else if (a.common.csv) {
    std::cout << plain_header(a.common.seed) << "\n";
    std::cout << "p,c,r,field_degree,x,y,z\n";
    auto limbs = [](const FieldElement& e) {
      std::string s;
      for (size_t l = 0; l < e.rep().size(); ++l) {
        if (l) s += ':';
        s += std::to_string(e.rep()[l]);
      }
      return s;
    };
    for (const CertPoint& pt : cert.points)
      std::cout << cert.p << "," << c_eff << "," << pt.r << "," << pt.x.ctx().m << ","
                << limbs(pt.x) << "," << limbs(pt.y) << "," << limbs(pt.z) << "\n";
  } else {
    std::cout << plain_header(a.common.seed) << "\n";
    std::cout << "certificate p = " << cert.p << ", c = " << c_eff;
    if (a.psp)
      std::cout << "  (psp: bounds PSp_4(" << a.p << "^r) for (3,3," << a.c
                << "), built at doubled conductor)";
    std::cout << "\n";
    std::cout << "candidate_rs = {" << join_longs(cert.candidate_rs, ", ") << "}\n";
    std::cout << (a.psp ? "psp_bound = " : "certified_bound = ") << bound << "\n";
    std::cout << "points (" << cert.points.size() << "):\n";
    for (const CertPoint& pt : cert.points)
      std::cout << "  r = " << pt.r << "  F_" << a.p << "^" << pt.x.ctx().m
                << "  x = " << pt.x.str() << "  y = " << pt.y.str()
                << "  z = " << pt.z.str() << "\n";
  }
  return 0;
}

// ---- census ----

struct CensusArgs {
  Common common;
  uint64_t q = 2;
  std::string triple;
  uint64_t samples = 4000;
  uint64_t order_calls = 6;
  bool central = false;
};

int run_census(const CensusArgs& a) {
  auto [p, m] = prime_power(a.q);
  (void)p;
  (void)m;
  std::vector<long> t3 = parse_triple(a.triple);
  if (t3[0] < 1 || t3[1] < 1 || t3[2] < 1)
    throw std::invalid_argument("census: triple entries must be positive");
  FieldCtx ctx = make_sp4_field(a.q);
  CensusBudget budget{a.samples, a.order_calls};
  CensusResult res =
      census_search(ctx, static_cast<uint64_t>(t3[0]), static_cast<uint64_t>(t3[1]),
                    static_cast<uint64_t>(t3[2]), a.common.seed, budget, a.central);

  if (a.common.json) {
    ordered_json j = json_header("census", a.common.seed);
    j["q"] = a.q;
    j["triple"] = t3;
    j["central_product"] = a.central;
    j["budget"] = {{"max_samples", a.samples}, {"max_order_calls", a.order_calls}};
    j["found"] = res.found;
    j["samples_used"] = res.samples_used;
    j["order_calls"] = res.order_calls;
    j["budget_exhausted"] = res.budget_exhausted;
    if (res.found) {
      j["witness1"] = mat_json(*res.g1);
      j["witness2"] = mat_json(*res.g2);
    }
    emit_json(j);
  } else if (a.common.csv) {
    std::cout << plain_header(a.common.seed) << "\n";
    std::cout << "q,a,b,c,found,witness1,witness2\n";
    std::cout << a.q << "," << t3[0] << "," << t3[1] << "," << t3[2] << ","
              << (res.found ? 1 : 0) << ",";
    if (res.found)
      std::cout << mat_compact(*res.g1) << "," << mat_compact(*res.g2);
    else
      std::cout << ",";
    std::cout << "\n";
  } else {
    std::cout << plain_header(a.common.seed) << "\n";
    std::cout << "census q = " << a.q << "  triple (" << join_longs(t3, ",") << ")"
              << (a.central ? "  [central product]" : "") << "\n";
    if (res.found) {
      std::cout << "verdict: FOUND  (samples = " << res.samples_used
                << ", order calls = " << res.order_calls << ")\n";
      std::cout << "witness 1:\n" << res.g1->str() << "witness 2:\n" << res.g2->str();
    } else {
      std::cout << "verdict: none found within budget (samples = " << res.samples_used
                << ", order calls = " << res.order_calls
                << "); not a proof of absence\n";
    }
  }
  return res.found ? 0 : 3;
}

// ---- verify ----

struct VerifyArgs {
  Common common;
  std::string suite = "all";
  uint64_t samples = 0;  // 0 -> per-suite default
  uint64_t q = 0;        // 0 -> per-suite default
  long c = 12;
  long max_len = 6;
};

struct SuiteResult {
  std::string name;
  uint64_t checks = 0;
  uint64_t failures = 0;
  std::string note;
};

SuiteResult suite_procesi(uint64_t q, uint64_t samples, uint64_t seed) {
  SuiteResult res{"procesi"};
  FieldCtx k = make_sp4_field(q);
  Rng rng(seed);
  auto random_invertible = [&](void) {
    while (true) {
      Mat4 g(k);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) g.set(i, j, k.random_element(rng));
      if (!g.det().is_zero()) return g;
    }
  };
  for (uint64_t s = 0; s < samples; ++s) {
    Mat4 z1 = random_invertible(), z2 = random_invertible(), z3 = random_invertible(),
         z4 = random_invertible(), z5 = random_invertible();
    ++res.checks;
    if (!procesi_sym5(z1, z2, z3, z4, z5).is_zero()) {
      ++res.failures;
      std::cerr << "procesi_sym5 violation at sample " << s << " over q = " << q << "\n";
    }
    for (int kk = 1; kk <= 3; ++kk) {
      ++res.checks;
      if (!procesi_lhs(kk, z1, z2, z3).is_zero()) {
        ++res.failures;
        std::cerr << "procesi_lhs(" << kk << ") violation at sample " << s << " over q = "
                  << q << ":\n"
                  << z1.str() << z2.str() << z3.str();
      }
    }
  }
  res.note = "q = " + std::to_string(q) + ", " + std::to_string(samples) + " samples";
  return res;
}

SuiteResult suite_rho(uint64_t q, uint64_t samples, uint64_t seed) {
  SuiteResult res{"rho"};
  FieldCtx k = make_sp4_field(q);
  Rng rng(seed);
  uint64_t conforming = 0, attempts = 0;
  const uint64_t max_attempts = samples * 200;
  while (conforming < samples && attempts < max_attempts) {
    ++attempts;
    Mat4 g1 = random_order3(k, rng), g2 = random_order3(k, rng);
    if (!is_absolutely_irreducible(g1, g2)) continue;
    ++conforming;
    CharFieldGens gens = charfield_generators(g1, g2);
    ++res.checks;
    if (!rho_eval(gens.t12, gens.c12, gens.t1m2).is_zero()) {
      ++res.failures;
      std::cerr << "rho violation over q = " << q << ":\n" << g1.str() << g2.str();
    }
    // classify_case re-verifies the full per-case formula list internally.
    CaseReport rep = classify_case(g1, g2);
    (void)rep;
    ++res.checks;
  }
  res.note = "q = " + std::to_string(q) + ", " + std::to_string(conforming) +
             " conforming pairs in " + std::to_string(attempts) + " attempts";
  if (conforming == 0)
    res.note += " (vacuous: no absolutely irreducible order-3 pairs sampled)";
  return res;
}

SuiteResult suite_annihilation(uint64_t q, long cmax, uint64_t samples, uint64_t seed) {
  SuiteResult res{"annihilation"};
  FieldCtx k = make_sp4_field(q);
  Rng rng(seed);
  uint64_t usable = 0;
  for (uint64_t s = 0; s < samples; ++s) {
    Mat4 g = random_element(k, rng);
    std::optional<uint64_t> ord = element_order(g, static_cast<uint64_t>(cmax));
    if (!ord) continue;
    ++usable;
    for (long c = 1; c <= cmax; ++c) {
      if (c % static_cast<long>(*ord) != 0) continue;
      auto [th_ok, de_ok] = annihilation_check(g, static_cast<uint64_t>(c));
      res.checks += 2;
      if (!th_ok || !de_ok) {
        ++res.failures;
        std::cerr << "annihilation violation at order " << *ord << ", c = " << c
                  << " over q = " << q << ":\n"
                  << g.str();
      }
    }
  }
  res.note = "q = " + std::to_string(q) + ", " + std::to_string(usable) +
             " elements of order <= " + std::to_string(cmax);
  return res;
}

SuiteResult suite_reduce(uint64_t q, long max_len, uint64_t samples, uint64_t seed) {
  SuiteResult res{"reduce"};
  FieldCtx k = make_sp4_field(q);
  if (k.p == 3 || k.order() % 3 != 1)
    throw std::invalid_argument(
        "verify reduce: q must satisfy q = 1 mod 3 (needs a primitive cube root of "
        "unity); try 7, 13 or 25");
  FieldElement w = [&] {
    Rng r(5);
    while (true) {
      FieldElement x = k.random_element(r);
      if (!x.is_zero() && ((x * x) + x + k.one()).is_zero()) return x;
    }
  }();
  Rng rng(seed);
  auto random_gl3 = [&](void) {
    while (true) {
      Mat4 cj(k);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) cj.set(i, j, k.random_element(rng));
      if (cj.det().is_zero()) continue;
      Mat4 d(k);
      d.set(0, 0, k.one());
      d.set(1, 1, w);
      d.set(2, 2, w);
      d.set(3, 3, w * w);
      return cj * d * cj.inverse();
    }
  };
  std::vector<TraceWord> words = canonical_words(static_cast<size_t>(max_len), WordMode::GL);
  std::vector<TracePoly> reduced;
  reduced.reserve(words.size());
  for (const TraceWord& wd : words) reduced.push_back(reduce_trace(wd));
  for (uint64_t s = 0; s < samples; ++s) {
    Mat4 g1 = random_gl3(), g2 = random_gl3();
    TraceEvaluator ev(g1, g2);
    for (size_t i = 0; i < words.size(); ++i) {
      ++res.checks;
      if (ev.evaluate(reduced[i]) != ev.word_trace(words[i])) {
        ++res.failures;
        std::cerr << "reduce_trace mismatch on word " << words[i].str() << " over q = "
                  << q << ":\n"
                  << g1.str() << g2.str();
      }
    }
  }
  res.note = "q = " + std::to_string(q) + ", " + std::to_string(words.size()) +
             " words x " + std::to_string(samples) + " pairs";
  return res;
}

int run_verify(const VerifyArgs& a) {
  std::vector<SuiteResult> results;
  bool all = a.suite == "all";
  if (all || a.suite == "procesi")
    results.push_back(suite_procesi(a.q ? a.q : 101, a.samples ? a.samples : 1000,
                                    a.common.seed));
  if (all || a.suite == "rho")
    results.push_back(suite_rho(a.q ? a.q : 7, a.samples ? a.samples : 100,
                                a.common.seed));
  if (all || a.suite == "annihilation")
    results.push_back(suite_annihilation(a.q ? a.q : 5, a.c,
                                         a.samples ? a.samples : 2000, a.common.seed));
  if (all || a.suite == "reduce")
    results.push_back(suite_reduce(a.q ? a.q : 7, a.max_len, a.samples ? a.samples : 5,
                                   a.common.seed));
  if (results.empty()) {
    std::cerr << "trigen verify: unknown suite '" << a.suite
              << "' (use procesi, rho, annihilation, reduce, all)\n";
    return 2;
  }

  uint64_t failures = 0;
  for (const SuiteResult& r : results) failures += r.failures;

  if (a.common.json) {
    ordered_json j = json_header("verify", a.common.seed);
    ordered_json arr = ordered_json::array();
    for (const SuiteResult& r : results) {
      ordered_json sj;
      sj["suite"] = r.name;
      sj["checks"] = r.checks;
      sj["failures"] = r.failures;
      sj["note"] = r.note;
      arr.push_back(sj);
    }
    j["suites"] = arr;
    j["pass"] = (failures == 0);
    emit_json(j);
  } else {
    std::cout << plain_header(a.common.seed) << "\n";
    for (const SuiteResult& r : results)
      std::cout << "suite " << r.name << ": " << r.checks << " checks, " << r.failures
                << " failures  [" << (r.failures == 0 ? "PASS" : "FAIL") << "]  ("
                << r.note << ")\n";
    std::cout << "verify: " << (failures == 0 ? "PASS" : "FAIL") << "\n";
  }
  return failures == 0 ? 0 : 1;
}

// ---- classdim ----

struct ClassdimArgs {
  Common common;
  long n = 0;
  std::string unipotent;
  std::string semisimple;
  std::string dims;
  long dim_h = 0;
};

int run_classdim(const ClassdimArgs& a) {
  if (!a.dims.empty()) {
    if (a.dim_h <= 0)
      throw std::invalid_argument("classdim: --dims needs --dim-h (ambient dimension)");
    std::vector<long> d = parse_longs(a.dims, "dims");
    if (d.size() != 3)
      throw std::invalid_argument("classdim: --dims expects three class dimensions");
    Verdict v = g_triple_classify(a.dim_h, {d[0], d[1], d[2]});
    long sum = d[0] + d[1] + d[2];
    if (a.common.json) {
      ordered_json j = json_header("classdim", a.common.seed);
      j["mode"] = "triple";
      j["dim_h"] = a.dim_h;
      j["class_dims"] = d;
      j["sum"] = sum;
      j["threshold"] = 2 * a.dim_h;
      j["verdict"] = to_string(v);
      emit_json(j);
    } else {
      std::cout << plain_header(a.common.seed) << "\n";
      std::cout << "sum of class dimensions = " << sum << " vs 2 dim H = " << 2 * a.dim_h
                << "\n";
      std::cout << "verdict: " << to_string(v) << "\n";
    }
    return 0;
  }

  bool uni = !a.unipotent.empty(), semi = !a.semisimple.empty();
  if (uni == semi)
    throw std::invalid_argument(
        "classdim: give exactly one of --unipotent (Jordan blocks) or --semisimple "
        "(eigenvalue multiplicities), or --dims with --dim-h");
  std::vector<long> parts = parse_longs(uni ? a.unipotent : a.semisimple,
                                        uni ? "unipotent" : "semisimple");
  long val = uni ? class_dim_unipotent(a.n, parts) : class_dim_semisimple(a.n, parts);
  if (a.common.json) {
    ordered_json j = json_header("classdim", a.common.seed);
    j["mode"] = uni ? "unipotent" : "semisimple";
    j["n"] = a.n;
    j[uni ? "jordan_blocks" : "multiplicities"] = parts;
    j["class_dim"] = val;
    emit_json(j);
  } else {
    std::cout << plain_header(a.common.seed) << "\n";
    std::cout << "class_dim_" << (uni ? "unipotent" : "semisimple") << "(n = " << a.n
              << ", [" << join_longs(parts, ",") << "]) = " << val << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trigen: triangle-generation toolkit for symplectic and linear groups"};
  app.require_subcommand(1);

  ClassifyArgs cla;
  CLI::App* classify = app.add_subcommand(
      "classify", "rigidity verdict for a triple against a simple algebraic group");
  classify->add_option("--family", cla.family, "family: A, B, C, D, G2, F4, E6, E7, E8")
      ->required();
  classify->add_option("--rank", cla.rank, "Lie rank")->required();
  classify->add_option("--triple", cla.triple, "triple a,b,c")->required();
  classify->add_option("--isogeny", cla.isogeny, "adjoint | sc | other (default adjoint)");
  classify->add_option("--char", cla.characteristic,
                       "field characteristic (0 = generic, default)");
  add_common(classify, cla.common, false);

  TablesArgs tab;
  CLI::App* tables = app.add_subcommand("tables", "dump an embedded classification table");
  tables->add_option("--which", tab.which, "table number: 1, 3 or 4")->required();
  add_common(tables, tab.common, true);

  CycloArgs cyc;
  CLI::App* cyclo_cmd = app.add_subcommand("cyclo", "annihilating polynomials of trace values");
  CLI::App* theta_cmd = cyclo_cmd->add_subcommand("theta", "Theta_c, annihilates chi_3");
  CLI::App* delta_cmd = cyclo_cmd->add_subcommand("delta", "Delta_c, annihilates chi_2");
  cyclo_cmd->require_subcommand(1);
  for (CLI::App* sub : {theta_cmd, delta_cmd}) {
    sub->add_option("--c", cyc.c, "conductor (order bound), c >= 1")->required();
    Common& cc = cyc.common;
    add_common(sub, cc, false);
  }

  CertArgs cert;
  CLI::App* certificate = app.add_subcommand(
      "certificate", "enumerate candidate degrees r for (3,3,c)-generation of Sp_4(p^r)");
  certificate->add_option("--p", cert.p, "prime characteristic")->required();
  certificate->add_option("--c", cert.c, "conductor c >= 1")->required();
  certificate->add_flag("--psp", cert.psp,
                        "bound PSp_4(p^r) instead (odd p; doubles the conductor)");
  certificate->add_option("--degree-cap", cert.degree_cap,
                          "largest intermediate field degree (default 48)");
  certificate->add_option("--conductor-cap", cert.conductor_cap,
                          "largest accepted conductor (default 60)");
  add_common(certificate, cert.common, true);

  CensusArgs cen;
  CLI::App* census = app.add_subcommand(
      "census", "randomized search for an (a,b,c) generating pair in Sp_4(q)");
  census->add_option("--q", cen.q, "field size, a prime power")->required();
  census->add_option("--triple", cen.triple, "orders a,b,c")->required();
  census->add_option("--samples", cen.samples, "candidate pair budget (default 4000)");
  census->add_option("--order-calls", cen.order_calls,
                     "full group-order computation budget (default 6)");
  census->add_flag("--central", cen.central,
                   "require (g1 g2)^c central instead of trivial (projective search)");
  add_common(census, cen.common, true);

  VerifyArgs ver;
  CLI::App* verify = app.add_subcommand("verify", "identity and property campaigns");
  verify->add_option("--suite", ver.suite,
                     "procesi | rho | annihilation | reduce | all (default all)");
  verify->add_option("--samples", ver.samples, "sample count (0 = per-suite default)");
  verify->add_option("--q", ver.q, "field size (0 = per-suite default)");
  verify->add_option("--c", ver.c, "annihilation: largest conductor (default 12)");
  verify->add_option("--max-len", ver.max_len,
                     "reduce: largest canonical word length (default 6)");
  add_common(verify, ver.common, false);

  ClassdimArgs cds;
  CLI::App* classdim = app.add_subcommand(
      "classdim", "conjugacy class dimensions in SL_n and the 2 dim H comparison");
  classdim->add_option("--n", cds.n, "matrix size n");
  classdim->add_option("--unipotent", cds.unipotent, "Jordan block sizes, e.g. 2,2,1,1");
  classdim->add_option("--semisimple", cds.semisimple,
                       "eigenvalue multiplicities, e.g. 2,2,1,1");
  classdim->add_option("--dims", cds.dims, "three class dimensions for the triple test");
  classdim->add_option("--dim-h", cds.dim_h, "dim H for the triple test");
  add_common(classdim, cds.common, false);

  int code = 0;
  classify->callback([&] { code = run_classify(cla); });
  tables->callback([&] { code = run_tables(tab); });
  theta_cmd->callback([&] {
    cyc.is_theta = true;
    code = run_cyclo(cyc);
  });
  delta_cmd->callback([&] {
    cyc.is_theta = false;
    code = run_cyclo(cyc);
  });
  certificate->callback([&] { code = run_certificate(cert); });
  census->callback([&] { code = run_census(cen); });
  verify->callback([&] { code = run_verify(ver); });
  classdim->callback([&] { code = run_classdim(cds); });

  try {
    app.parse(argc, argv);
    // The seed override applies before any callback runs via preparse; the
    // callbacks above have already consumed the final seeds by the time
    // parse returns, so apply the env override up front instead.
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const ResourceError& e) {
    std::cerr << "trigen: resource cap exceeded: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "trigen: invalid argument: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "trigen: error: " << e.what() << "\n";
    return 1;
  }
  return code;
}
