#include "trigen/traceid.hpp"

#include <algorithm>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <utility>

#include "trigen/fieldpoly.hpp"

namespace trigen {
namespace {

constexpr uint64_t kExtSeed = 0x747269u;
constexpr uint64_t kFactorSeed = 0x66616374u;

using IWord = std::vector<int8_t>;

// Letter order 1 < -1 < 2 < -2 (< 3 for identity slot words).
int letter_key(int l) {
  switch (l) {
    case 1: return 0;
    case -1: return 1;
    case 2: return 2;
    case -2: return 3;
    case 3: return 4;
    default: return 5;
  }
}

bool word_less(const IWord& a, const IWord& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    int ka = letter_key(a[i]), kb = letter_key(b[i]);
    if (ka != kb) return ka < kb;
  }
  return a.size() < b.size();
}

IWord min_rotation(IWord w) {
  if (w.size() < 2) return w;
  IWord best = w;
  IWord rot = std::move(w);
  const std::size_t n = rot.size();
  for (std::size_t r = 1; r < n; ++r) {
    std::rotate(rot.begin(), rot.begin() + 1, rot.end());
    if (word_less(rot, best)) best = rot;
  }
  return best;
}

IWord inverted_reversal(const IWord& w) {
  IWord r(w.rbegin(), w.rend());
  for (auto& l : r) l = static_cast<int8_t>(-l);
  return r;
}

// Cyclic cancellation of adjacent inverse pairs only; for slot words, whose
// matrices carry no order relation.
IWord cancel_cyclic(IWord w) {
  bool changed = true;
  while (changed && w.size() >= 2) {
    changed = false;
    for (std::size_t i = 0; i < w.size(); ++i) {
      std::size_t j = (i + 1) % w.size();
      if (i == j) break;
      if (w[i] == -w[j]) {
        if (i < j) {
          w.erase(w.begin() + static_cast<long>(j));
          w.erase(w.begin() + static_cast<long>(i));
        } else {
          w.erase(w.begin() + static_cast<long>(i));
          w.erase(w.begin());
        }
        changed = true;
        break;
      }
    }
  }
  return w;
}

// Cyclic reduction under g^3 = 1: cancel (x, -x), merge (x, x) -> (-x).
IWord group_reduce(IWord w) {
  bool changed = true;
  while (changed && w.size() >= 2) {
    changed = false;
    for (std::size_t i = 0; i < w.size(); ++i) {
      std::size_t j = (i + 1) % w.size();
      if (i == j) break;
      if (w[i] == -w[j]) {
        if (i < j) {
          w.erase(w.begin() + static_cast<long>(j));
          w.erase(w.begin() + static_cast<long>(i));
        } else {
          w.erase(w.begin() + static_cast<long>(i));
          w.erase(w.begin());
        }
        changed = true;
        break;
      }
      if (w[i] == w[j]) {
        int8_t x = w[i];
        if (i < j) {
          w.erase(w.begin() + static_cast<long>(j));
          w[i] = static_cast<int8_t>(-x);
        } else {
          w.erase(w.begin() + static_cast<long>(i));
          w[0] = static_cast<int8_t>(-x);
        }
        changed = true;
        break;
      }
    }
  }
  return w;
}

IWord gcanon(IWord w, bool sp) {
  w = group_reduce(std::move(w));
  IWord best = min_rotation(w);
  if (sp && !w.empty()) {
    IWord alt = min_rotation(inverted_reversal(w));
    if (word_less(alt, best)) best = alt;
  }
  return best;
}

// ---- internal symbolic polynomials over slot/group words -------------------

struct ISym {
  int8_t kind;  // 0 = t, 1 = c2
  IWord w;
  bool operator==(const ISym& o) const { return kind == o.kind && w == o.w; }
  bool operator<(const ISym& o) const {
    if (kind != o.kind) return kind < o.kind;
    return word_less(w, o.w);
  }
};
using IMono = std::vector<ISym>;  // kept sorted
using IPoly = std::map<IMono, mpz_class>;

IPoly ipoly_const(long c) {
  IPoly p;
  if (c) p[{}] = c;
  return p;
}

IPoly T(IWord w) {
  IPoly p;
  p[{ISym{0, min_rotation(std::move(w))}}] = 1;
  return p;
}

IPoly C(IWord w) {
  IPoly p;
  p[{ISym{1, min_rotation(std::move(w))}}] = 1;
  return p;
}

IPoly add(const IPoly& a, const IPoly& b) {
  IPoly r = a;
  for (const auto& [m, c] : b) {
    mpz_class& v = r[m];
    v += c;
    if (v == 0) r.erase(m);
  }
  return r;
}

IPoly neg(const IPoly& a) {
  IPoly r;
  for (const auto& [m, c] : a) r[m] = -c;
  return r;
}

IPoly sub(const IPoly& a, const IPoly& b) { return add(a, neg(b)); }

IPoly mul(const IPoly& a, const IPoly& b) {
  IPoly r;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      IMono m = ma;
      m.insert(m.end(), mb.begin(), mb.end());
      std::sort(m.begin(), m.end());
      mpz_class& v = r[m];
      v += ca * cb;
      if (v == 0) r.erase(m);
    }
  return r;
}

IPoly scale(const IPoly& a, long c) {
  IPoly r;
  if (c == 0) return r;
  for (const auto& [m, k] : a) r[m] = k * c;
  return r;
}

IPoly half(const IPoly& a) {
  IPoly r;
  for (const auto& [m, c] : a) {
    if (mpz_odd_p(c.get_mpz_t()))
      throw std::logic_error("procesi identity: expected even coefficients");
    r[m] = c / 2;
  }
  return r;
}

// Trace of a slot word: cyclic cancellation, tr(I) = 4 for the empty word,
// and the square rewrite tr(V^2) = tr(V)^2 - 2 chi2(V).
IPoly trace_factor(IWord w) {
  w = cancel_cyclic(std::move(w));
  if (w.empty()) return ipoly_const(4);
  if (w.size() % 2 == 0) {
    std::size_t h = w.size() / 2;
    IWord rot = w;
    for (std::size_t r = 0; r < w.size(); ++r) {
      if (std::equal(rot.begin(), rot.begin() + static_cast<long>(h),
                     rot.begin() + static_cast<long>(h))) {
        IWord v(rot.begin(), rot.begin() + static_cast<long>(h));
        return sub(mul(T(v), T(v)), scale(C(v), 2));
      }
      std::rotate(rot.begin(), rot.begin() + 1, rot.end());
    }
  }
  return T(std::move(w));
}

// The Sym_5 antisymmetrization with slots (M1, M2, M3, M1^{e}, M2^{f}):
// k = 1 -> (M1, M2), k = 2 -> (M1^-1, M2), k = 3 -> (M1^-1, M2^-1).
IPoly procesi_expand(int k) {
  const int8_t labels[5] = {1, 2, 3, static_cast<int8_t>(k == 1 ? 1 : -1),
                            static_cast<int8_t>(k == 3 ? -2 : 2)};
  IPoly total;
  std::array<int, 5> base = {0, 1, 2, 3, 4};
  do {
    bool seen[5] = {};
    int ncyc = 0;
    IPoly term = ipoly_const(1);
    for (int s = 0; s < 5; ++s) {
      if (seen[s]) continue;
      ++ncyc;
      IWord w;
      int x = s;
      do {
        seen[x] = true;
        w.push_back(labels[x]);
        x = base[static_cast<std::size_t>(x)];
      } while (x != s);
      term = mul(term, trace_factor(std::move(w)));
    }
    total = add(total, scale(term, (5 - ncyc) % 2 == 0 ? 1 : -1));
  } while (std::next_permutation(base.begin(), base.end()));
  return total;
}

// The published grouping of the first identity. It is a valid identity with
// unit target coefficient, unlike the raw specialization (which carries the
// target with coefficient 4 and is useless in characteristic 2); the two
// differ by another valid identity.
IPoly printed_eq1() {
  IPoly p = add(add(T({1, 2, 1, 2, 3}), T({2, 1, 2, 1, 3})),
                add(T({1, 1, 2, 2, 3}), T({1, 2, 2, 1, 3})));
  p = add(p, add(T({2, 1, 1, 2, 3}), T({2, 2, 1, 1, 3})));
  p = sub(p, mul(T({1}), add(add(T({1, 2, 2, 3}), T({2, 1, 2, 3})),
                             T({2, 2, 1, 3}))));
  p = sub(p, mul(T({2}), add(add(T({1, 1, 2, 3}), T({1, 2, 1, 3})),
                             T({2, 1, 1, 3}))));
  p = add(p, mul(sub(mul(T({1}), T({2})), T({1, 2})),
                 add(T({1, 2, 3}), T({2, 1, 3}))));
  p = add(p, add(mul(C({2}), T({1, 1, 3})), mul(C({1}), T({2, 2, 3}))));
  p = add(p, mul(sub(sub(mul(T({1, 2}), T({2})), T({1, 2, 2})),
                     mul(T({1}), C({2}))),
                 T({1, 3})));
  p = add(p, mul(sub(sub(mul(T({1, 2}), T({1})), T({1, 1, 2})),
                     mul(T({2}), C({1}))),
                 T({2, 3})));
  IPoly g = T({1, 1, 2, 2});
  g = sub(g, mul(T({1, 1, 2}), T({2})));
  g = sub(g, mul(T({1, 2, 2}), T({1})));
  g = add(g, mul(mul(T({1, 2}), T({1})), T({2})));
  g = sub(g, mul(C({1}), C({2})));
  g = sub(g, C({1, 2}));
  return sub(p, mul(g, T({3})));
}

mpz_class slot_coeff(const IPoly& p, IWord w) {
  auto it = p.find(IMono{ISym{0, min_rotation(std::move(w))}});
  return it == p.end() ? mpz_class(0) : it->second;
}

struct Identities {
  IPoly id[4];
  std::vector<SlotTerm> pub[4];
};

const Identities& identities() {
  static const Identities ids = [] {
    Identities r;
    r.id[1] = printed_eq1();
    r.id[2] = half(procesi_expand(2));
    r.id[3] = procesi_expand(3);
    const std::size_t counts[4] = {0, 30, 42, 59};
    const IWord targets[4] = {{}, {1, 2, 1, 2, 3}, {1, 2, -1, 2, 3},
                              {1, 2, -1, -2, 3}};
    for (int k = 1; k <= 3; ++k) {
      if (r.id[k].size() != counts[k])
        throw std::logic_error("procesi identity: unexpected term count");
      if (slot_coeff(r.id[k], targets[k]) != 1)
        throw std::logic_error("procesi identity: target coefficient not 1");
    }
    if (slot_coeff(r.id[1], {2, 1, 2, 1, 3}) != 1 ||
        slot_coeff(r.id[2], {-1, 2, 1, 2, 3}) != 1)
      throw std::logic_error("procesi identity: partner coefficient not 1");
    for (int k = 1; k <= 3; ++k) {
      for (const auto& [mono, coeff] : r.id[k]) {
        SlotTerm t;
        t.coeff = coeff;
        for (const auto& s : mono)
          t.factors.push_back(SlotFactor{
              s.kind == 0 ? SymbolKind::TR : SymbolKind::CHI2, s.w});
        std::sort(t.factors.begin(), t.factors.end());
        r.pub[k].push_back(std::move(t));
      }
    }
    return r;
  }();
  return ids;
}

// ---- shared evaluation helpers ---------------------------------------------

FieldElement trace_of_product(const Mat4& a, const Mat4& b) {
  const FieldCtx& k = a.ctx();
  std::vector<uint64_t> acc(k.m, 0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) fe_mul_add(k, a.entry(i, j), b.entry(j, i), acc.data());
  return FieldElement(&k, std::move(acc));
}

// kind 0: trace of the product along `mats`; kind 1: chi2 of it.
FieldElement eval_mats(int kind, const std::vector<const Mat4*>& mats) {
  if (mats.size() == 1)
    return kind == 0 ? mats[0]->trace() : chi2_of(*mats[0]);
  Mat4 p = *mats[0];
  for (std::size_t i = 1; i + 1 < mats.size(); ++i) p = p * *mats[i];
  if (kind == 0) return trace_of_product(p, *mats.back());
  return chi2_of(p * *mats.back());
}

void require_same_field(std::initializer_list<const Mat4*> ms,
                        const char* who) {
  const Mat4* first = *ms.begin();
  for (const Mat4* m : ms)
    if (!m->ctx().same_field(first->ctx()))
      throw std::invalid_argument(std::string(who) +
                                  ": matrices over different fields");
}

// ---- reduction engine -------------------------------------------------------

struct ReduceShared {
  std::mutex mu;
  std::map<IWord, IPoly> memo;
};

ReduceShared& reduce_shared() {
  static ReduceShared s;
  return s;
}

IWord subst_slot(const IWord& slotw, int8_t s, int8_t t, const IWord& tail) {
  IWord r;
  for (int8_t l : slotw) {
    switch (l) {
      case 1: r.push_back(s); break;
      case -1: r.push_back(static_cast<int8_t>(-s)); break;
      case 2: r.push_back(t); break;
      case -2: r.push_back(static_cast<int8_t>(-t)); break;
      case 3: r.insert(r.end(), tail.begin(), tail.end()); break;
      default:
        throw std::logic_error("trace reduction: unexpected slot letter");
    }
  }
  return r;
}

// wc is GL-canonical of length >= 6. Must be called with reduce_shared().mu
// held; `active` is the in-progress stack for cycle detection.
const IPoly& reduce_canonical(const IWord& wc, std::size_t parent_len,
                              int parent_pat, std::vector<IWord>& active) {
  auto& shared = reduce_shared();
  auto it = shared.memo.find(wc);
  if (it != shared.memo.end()) return it->second;
  for (const auto& a : active)
    if (a == wc) throw std::logic_error("trace reduction: recursion cycle");
  const std::size_t len = wc.size();
  if (len <= 4 || len % 2 != 0)
    throw std::logic_error("trace reduction: non-canonical recursion word");
  int pat = 0;
  std::size_t rot = 0;
  for (int p = 1; p <= 3 && !pat; ++p)
    for (std::size_t r = 0; r < len; ++r) {
      auto at = [&](std::size_t i) { return wc[(r + i) % len]; };
      bool m = p == 1   ? (at(2) == at(0) && at(3) == at(1))
               : p == 2 ? (at(2) == -at(0) && at(3) == at(1))
                        : (at(2) == -at(0) && at(3) == -at(1));
      if (m) {
        pat = p;
        rot = r;
        break;
      }
    }
  if (!pat)
    throw std::logic_error(
        "trace reduction: no pattern found in a normalized word of length " +
        std::to_string(len));
  if (!(len < parent_len || (len == parent_len && pat < parent_pat)))
    throw std::logic_error(
        "trace reduction: termination metric failed to decrease");
  active.push_back(wc);
  IWord wr = wc;
  std::rotate(wr.begin(), wr.begin() + static_cast<long>(rot), wr.end());
  const int8_t s = wr[0], t = wr[1];
  const IWord tail(wr.begin() + 4, wr.end());
  mpz_class ctarget = 0;
  IPoly rest;
  for (const auto& [mono, coeff] : identities().id[pat]) {
    std::vector<ISym> syms;
    mpz_class k = coeff;
    for (const auto& sy : mono) {
      IWord c = gcanon(subst_slot(sy.w, s, t, tail), /*sp=*/false);
      if (sy.kind == 0) {
        if (c.empty()) {
          k *= 4;  // tr(I)
          continue;
        }
        syms.push_back(ISym{0, std::move(c)});
      } else {
        if (c.empty() || c.size() > 2)
          throw std::logic_error("trace reduction: chi2 word out of range");
        syms.push_back(ISym{1, std::move(c)});
      }
    }
    if (syms.size() == 1 && syms[0].kind == 0 && syms[0].w == wc) {
      ctarget += k;
      continue;
    }
    IPoly term;
    term[{}] = 1;
    for (auto& sy : syms) {
      if (sy.kind == 1 || sy.w.size() <= 4) {
        IPoly f;
        f[{sy}] = 1;
        term = mul(term, f);
      } else {
        term = mul(term, reduce_canonical(sy.w, len, pat, active));
      }
    }
    for (const auto& [m, c] : term) {
      mpz_class& v = rest[m];
      v += c * k;
      if (v == 0) rest.erase(m);
    }
  }
  if (ctarget != 1 && ctarget != -1)
    throw std::logic_error("trace reduction: target coefficient not a unit");
  IPoly result;
  for (const auto& [m, c] : rest) result[m] = ctarget == 1 ? -c : c;
  active.pop_back();
  return shared.memo.emplace(wc, std::move(result)).first->second;
}

// ---- quadratic extension cache for classify_case ---------------------------

const FieldCtx& quadratic_extension(const FieldCtx& base) {
  static std::mutex mu;
  static std::map<std::tuple<uint64_t, uint32_t, std::vector<uint64_t>>,
                  std::unique_ptr<FieldCtx>>
      cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(base.p, base.m, base.modulus);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache
             .emplace(std::move(key), std::make_unique<FieldCtx>(make_ext(
                                          base.p, base.m * 2, kExtSeed)))
             .first;
  return *it->second;
}

std::vector<FieldElement> roots_here(const FieldPoly& f) {
  std::vector<FieldElement> out;
  for (const auto& ff : factor(f, kFactorSeed))
    if (ff.f.degree() == 1)
      out.push_back(f.ctx().zero() - ff.f.coeff(0));
  std::sort(out.begin(), out.end());
  return out;
}

Mat4 sub_scalar(const Mat4& g, const FieldElement& s) {
  Mat4 r = g;
  for (int i = 0; i < 4; ++i) r.set(i, i, g.at(i, i) - s);
  return r;
}

bool mat_is_zero(const Mat4& g) {
  const FieldCtx& k = g.ctx();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (!fe_is_zero(k, g.entry(i, j))) return false;
  return true;
}

// Order-3 g has minimal polynomial of degree 3 iff g^2 + g + 1 != 0 (in
// characteristic 3 this is (g - 1)^2, so the test is uniform).
bool minpoly_deg3(const Mat4& g) {
  return !mat_is_zero(g * g + g + Mat4::identity(g.ctx()));
}

Vec4 vadd(const Vec4& a, const Vec4& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}

Vec4 vscale(const FieldElement& s, const Vec4& a) {
  return {s * a[0], s * a[1], s * a[2], s * a[3]};
}

void require_conforming(const Mat4& g1, const Mat4& g2, const char* who) {
  require_same_field({&g1, &g2}, who);
  for (const Mat4* g : {&g1, &g2}) {
    if (!is_symplectic(*g))
      throw std::invalid_argument(std::string(who) + ": input not symplectic");
    if (g->is_identity() || !(*g * *g * *g).is_identity())
      throw std::invalid_argument(std::string(who) +
                                  ": input not of order 3");
  }
  if (!is_absolutely_irreducible(g1, g2))
    throw std::invalid_argument(std::string(who) +
                                ": pair not absolutely irreducible");
}

struct CaseTraces {
  FieldElement t12, c12, t1m2, c1m2, t121m2, t12m12, t12m1m2, t1m21m2, t1212,
      t1m2m1m2;
};

CaseTraces case_traces(const Mat4& g1, const Mat4& g2) {
  Mat4 g1i = g1 * g1, g2i = g2 * g2;  // g^-1 = g^2 for order 3
  return CaseTraces{
      (g1 * g2).trace(),
      chi2_of(g1 * g2),
      (g1 * g2i).trace(),
      chi2_of(g1 * g2i),
      (g1 * g2 * g1 * g2i).trace(),
      (g1 * g2 * g1i * g2).trace(),
      (g1 * g2 * g1i * g2i).trace(),
      (g1 * g2i * g1 * g2i).trace(),
      (g1 * g2 * g1 * g2).trace(),
      (g1 * g2i * g1i * g2i).trace(),
  };
}

// Verifies the published formula list of the given case plus the universal
// relations; returns the names of violated formulas.
std::vector<std::string> violated_formulas(const FieldCtx& k, ProofCase lab,
                                           const CaseTraces& tv) {
  auto fe = [&](long n) { return k.from_int(n); };
  std::vector<std::string> bad;
  auto req = [&](bool ok, const char* id) {
    if (!ok) bad.emplace_back(id);
  };
  const FieldElement x = tv.t12, y = tv.c12, z = tv.t1m2;
  req(tv.t1212 == x * x - fe(2) * y, "t1212");
  const FieldElement f1 = z + x + fe(1);
  const FieldElement f2 = z * z + (fe(2) * x - fe(10)) * z + x * x -
                          fe(9) * y + fe(8) * x + fe(7);
  req((f1 * f2).is_zero(), "rho");
  req(tv.t1m2m1m2 == tv.t12m12, "symplectic trace symmetry");
  switch (lab) {
    case ProofCase::A1:
    case ProofCase::A2b:
      req(tv.c1m2 == fe(-2) * x - fe(1), "c1m2");
      req(tv.t121m2 == fe(0) - x * x - fe(4) * x - fe(3), "t121m2");
      req(tv.t12m12 == fe(0) - x * x - fe(4) * x - fe(3), "t12m12");
      req(tv.t12m1m2 == x * x + fe(4) * x + fe(8), "t12m1m2");
      req(tv.t1m21m2 == x * x + fe(12) * x + fe(18), "t1m21m2");
      req(z == fe(0) - x - fe(4), "t1m2");
      req(y == fe(2) * x + fe(7), "c12");
      break;
    case ProofCase::A2a:
      req(tv.c1m2 == y + fe(2) * x + fe(1), "c1m2");
      req(tv.t121m2 == fe(0) - x * x + fe(2) * y + x + fe(1), "t121m2");
      req(tv.t12m12 == fe(0) - x * x + fe(2) * y + x + fe(1), "t12m12");
      req(tv.t12m1m2 == x * x + y + fe(2) * x + fe(1), "t12m1m2");
      req(tv.t1m21m2 == x * x - fe(2) * y - fe(2) * x - fe(1), "t1m21m2");
      req(z == fe(0) - x - fe(1), "t1m2");
      break;
    case ProofCase::B1:
      req(tv.c1m2 == fe(2) * z + y - fe(2) * x, "c1m2");
      req(tv.t121m2 == z * x - z - y + x, "t121m2");
      req(tv.t12m12 == z * x - z - y + x, "t12m12");
      req(tv.t12m1m2 ==
              fe(0) - z * x + fe(4) * z - fe(4) * x + fe(4) * y - fe(4),
          "t12m1m2");
      req(tv.t1m21m2 == fe(0) - fe(2) * z * x - x * x + fe(6) * z +
                            fe(7) * y - fe(4) * x - fe(7),
          "t1m21m2");
      req(f2.is_zero(), "quadratic relation");
      break;
    case ProofCase::B2:
      req(tv.c1m2 == y + fe(2) * x + fe(1), "c1m2");
      req(tv.t121m2 == fe(0) - x * x + fe(2) * y + x + fe(1), "t121m2");
      req(tv.t12m12 == fe(0) - x * x - y - fe(2) * x + fe(1), "t12m12");
      req(tv.t12m1m2 == x * x + y + fe(2) * x + fe(1), "t12m1m2");
      req(tv.t1m21m2 == x * x - fe(2) * y - fe(2) * x - fe(1), "t1m21m2");
      req(z == fe(0) - x - fe(1), "t1m2");
      break;
  }
  return bad;
}

}  // namespace

// ---- TraceWord --------------------------------------------------------------

TraceWord::TraceWord(std::vector<int8_t> letters, WordMode mode)
    : mode_(mode) {
  if (letters.empty())
    throw std::invalid_argument("TraceWord: empty letter sequence");
  for (int8_t l : letters)
    if (l != 1 && l != -1 && l != 2 && l != -2)
      throw std::invalid_argument("TraceWord: letter outside {1,-1,2,-2}");
  letters_ = gcanon(std::move(letters), mode == WordMode::SP);
  if (letters_.empty())
    throw std::invalid_argument(
        "TraceWord: word reduces to the identity under g^3 = 1");
}

bool TraceWord::operator<(const TraceWord& o) const {
  if (mode_ != o.mode_) return mode_ < o.mode_;
  if (letters_.size() != o.letters_.size())
    return letters_.size() < o.letters_.size();
  return word_less(letters_, o.letters_);
}

std::string TraceWord::str() const {
  std::string r;
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (i) r += ",";
    r += std::to_string(static_cast<int>(letters_[i]));
  }
  return r;
}

// ---- TraceSymbol ------------------------------------------------------------

TraceSymbol::TraceSymbol(SymbolKind kind, TraceWord word)
    : kind_(kind), word_(std::move(word)) {
  const std::size_t cap = kind_ == SymbolKind::TR ? 4 : 2;
  if (word_.size() > cap)
    throw std::invalid_argument(
        "TraceSymbol: word too long for the generator set");
}

bool TraceSymbol::operator<(const TraceSymbol& o) const {
  if (kind_ != o.kind_) return kind_ < o.kind_;
  return word_ < o.word_;
}

std::string TraceSymbol::str() const {
  return (kind_ == SymbolKind::TR ? "t(" : "c2(") + word_.str() + ")";
}

// ---- TracePoly --------------------------------------------------------------

TracePoly TracePoly::constant(const mpz_class& c) {
  TracePoly p;
  if (c != 0) p.terms_[{}] = c;
  return p;
}

TracePoly TracePoly::symbol(const TraceSymbol& s) {
  TracePoly p;
  p.terms_[{s}] = 1;
  return p;
}

mpz_class TracePoly::coeff(Monomial m) const {
  std::sort(m.begin(), m.end());
  auto it = terms_.find(m);
  return it == terms_.end() ? mpz_class(0) : it->second;
}

TracePoly TracePoly::operator+(const TracePoly& o) const {
  TracePoly r = *this;
  for (const auto& [m, c] : o.terms_) {
    mpz_class& v = r.terms_[m];
    v += c;
    if (v == 0) r.terms_.erase(m);
  }
  return r;
}

TracePoly TracePoly::operator-(const TracePoly& o) const {
  TracePoly r = *this;
  for (const auto& [m, c] : o.terms_) {
    mpz_class& v = r.terms_[m];
    v -= c;
    if (v == 0) r.terms_.erase(m);
  }
  return r;
}

TracePoly TracePoly::operator*(const TracePoly& o) const {
  TracePoly r;
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) {
      Monomial m;
      m.reserve(ma.size() + mb.size());
      std::merge(ma.begin(), ma.end(), mb.begin(), mb.end(),
                 std::back_inserter(m));
      mpz_class& v = r.terms_[m];
      v += ca * cb;
      if (v == 0) r.terms_.erase(m);
    }
  return r;
}

TracePoly TracePoly::scaled(const mpz_class& c) const {
  TracePoly r;
  if (c == 0) return r;
  for (const auto& [m, k] : terms_) r.terms_[m] = k * c;
  return r;
}

FieldElement TracePoly::evaluate(const Mat4& g1, const Mat4& g2) const {
  return TraceEvaluator(g1, g2).evaluate(*this);
}

std::string TracePoly::to_json() const {
  std::ostringstream os;
  os << "[";
  bool first_term = true;
  for (const auto& [m, c] : terms_) {
    if (!first_term) os << ",";
    first_term = false;
    os << "{\"monomial\":[";
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i) os << ",";
      os << "\"" << m[i].str() << "\"";
    }
    os << "],\"coeff\":\"" << c.get_str() << "\"}";
  }
  os << "]";
  return os.str();
}

// ---- TraceEvaluator ---------------------------------------------------------

TraceEvaluator::TraceEvaluator(Mat4 g1, Mat4 g2)
    : g1_(std::move(g1)), g2_(std::move(g2)), g1i_(g1_.ctx()),
      g2i_(g1_.ctx()) {
  require_same_field({&g1_, &g2_}, "TraceEvaluator");
  for (const Mat4* g : {&g1_, &g2_})
    if (!(*g * *g * *g).is_identity())
      throw std::invalid_argument("TraceEvaluator: input with g^3 != 1");
  g1i_ = g1_ * g1_;
  g2i_ = g2_ * g2_;
}

Mat4 TraceEvaluator::eval_letters(const std::vector<int8_t>& w) const {
  Mat4 r = Mat4::identity(g1_.ctx());
  for (int8_t l : w) {
    const Mat4& m = l == 1 ? g1_ : l == -1 ? g1i_ : l == 2 ? g2_ : g2i_;
    r = r * m;
  }
  return r;
}

FieldElement TraceEvaluator::value(const TraceSymbol& s) const {
  if (s.word().mode() == WordMode::SP && sp_checked_ == 0)
    sp_checked_ = is_symplectic(g1_) && is_symplectic(g2_) ? 1 : -1;
  if (s.word().mode() == WordMode::SP && sp_checked_ < 0)
    throw std::invalid_argument(
        "TraceEvaluator: SP-mode symbol on a non-symplectic pair");
  auto key = std::make_pair(s.kind() == SymbolKind::TR ? 0 : 1,
                            s.word().letters());
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  const std::vector<int8_t>& w = s.word().letters();
  FieldElement v = g1_.ctx().zero();
  if (s.kind() == SymbolKind::TR && w.size() >= 2) {
    Mat4 p = Mat4::identity(g1_.ctx());
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      const int8_t l = w[i];
      p = p * (l == 1 ? g1_ : l == -1 ? g1i_ : l == 2 ? g2_ : g2i_);
    }
    const int8_t l = w.back();
    v = trace_of_product(p, l == 1 ? g1_ : l == -1 ? g1i_ : l == 2 ? g2_
                                                                   : g2i_);
  } else {
    Mat4 p = eval_letters(w);
    v = s.kind() == SymbolKind::TR ? p.trace() : chi2_of(p);
  }
  cache_.emplace(std::move(key), v);
  return v;
}

FieldElement TraceEvaluator::evaluate(const TracePoly& p) const {
  const FieldCtx& k = g1_.ctx();
  FieldElement acc = k.zero();
  for (const auto& [m, c] : p.terms()) {
    FieldElement term = k.from_mpz(c);
    for (const auto& s : m) term = term * value(s);
    acc = acc + term;
  }
  return acc;
}

FieldElement TraceEvaluator::word_trace(const TraceWord& w) const {
  if (w.mode() == WordMode::SP && sp_checked_ == 0)
    sp_checked_ = is_symplectic(g1_) && is_symplectic(g2_) ? 1 : -1;
  if (w.mode() == WordMode::SP && sp_checked_ < 0)
    throw std::invalid_argument(
        "TraceEvaluator: SP-mode word on a non-symplectic pair");
  return eval_letters(w.letters()).trace();
}

// ---- enumeration ------------------------------------------------------------

std::vector<TraceWord> canonical_words(std::size_t max_len, WordMode mode) {
  std::set<std::vector<int8_t>> seen;
  std::vector<TraceWord> out;
  auto consider = [&](std::vector<int8_t> letters) {
    TraceWord w(std::move(letters), mode);
    if (seen.insert(w.letters()).second) out.push_back(std::move(w));
  };
  if (max_len >= 1)
    for (int8_t l : {int8_t{1}, int8_t{-1}, int8_t{2}, int8_t{-2}})
      consider({l});
  for (std::size_t len = 2; len <= max_len; len += 2)
    for (int phase = 0; phase < 2; ++phase)
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << len); ++mask) {
        std::vector<int8_t> letters(len);
        for (std::size_t i = 0; i < len; ++i) {
          const int8_t base =
              (i % 2 == static_cast<std::size_t>(phase)) ? 2 : 1;
          letters[i] = (mask >> i) & 1 ? static_cast<int8_t>(-base) : base;
        }
        consider(std::move(letters));
      }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<TraceSymbol> symbol_set(WordMode mode) {
  std::vector<TraceSymbol> out;
  for (const TraceWord& w : canonical_words(4, mode))
    out.emplace_back(SymbolKind::TR, w);
  for (const TraceWord& w : canonical_words(2, mode))
    out.emplace_back(SymbolKind::CHI2, w);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<TraceSymbol> generator_set() {
  std::vector<TraceSymbol> out;
  for (const TraceSymbol& s : symbol_set(WordMode::SP))
    if (s.word().size() >= 2) out.push_back(s);
  return out;
}

// ---- Procesi identities -----------------------------------------------------

bool SlotFactor::operator<(const SlotFactor& o) const {
  if (kind != o.kind) return kind < o.kind;
  return word_less(letters, o.letters);
}

const std::vector<SlotTerm>& procesi_identity(int k) {
  if (k < 1 || k > 3)
    throw std::invalid_argument("procesi_identity: k must be 1, 2 or 3");
  return identities().pub[k];
}

FieldElement procesi_lhs(int k, const Mat4& m1, const Mat4& m2,
                         const Mat4& m3) {
  if (k < 1 || k > 3)
    throw std::invalid_argument("procesi_lhs: k must be 1, 2 or 3");
  require_same_field({&m1, &m2, &m3}, "procesi_lhs");
  for (const Mat4* m : {&m1, &m2, &m3})
    if (m->det().is_zero())
      throw std::invalid_argument("procesi_lhs: singular input");
  const FieldCtx& f = m1.ctx();
  const Mat4 m1i = m1.inverse(), m2i = m2.inverse();
  auto slot = [&](int8_t l) -> const Mat4& {
    switch (l) {
      case 1: return m1;
      case -1: return m1i;
      case 2: return m2;
      case -2: return m2i;
      default: return m3;  // 3
    }
  };
  std::map<std::pair<int8_t, IWord>, FieldElement> cache;
  FieldElement acc = f.zero();
  for (const auto& [mono, coeff] : identities().id[k]) {
    FieldElement term = f.from_mpz(coeff);
    for (const auto& sy : mono) {
      auto key = std::make_pair(sy.kind, sy.w);
      auto it = cache.find(key);
      if (it == cache.end()) {
        std::vector<const Mat4*> mats;
        mats.reserve(sy.w.size());
        for (int8_t l : sy.w) mats.push_back(&slot(l));
        it = cache.emplace(std::move(key), eval_mats(sy.kind, mats)).first;
      }
      term = term * it->second;
    }
    acc = acc + term;
  }
  return acc;
}

FieldElement procesi_sym5(const Mat4& z1, const Mat4& z2, const Mat4& z3,
                          const Mat4& z4, const Mat4& z5) {
  require_same_field({&z1, &z2, &z3, &z4, &z5}, "procesi_sym5");
  const FieldCtx& f = z1.ctx();
  const Mat4* zs[5] = {&z1, &z2, &z3, &z4, &z5};
  std::map<IWord, FieldElement> cycle_trace;
  // Cycle elements are distinct slot indices; rotating the least index to the
  // front is a sound canonical form (letter order is irrelevant here).
  auto trace_of_cycle = [&](IWord cyc) -> const FieldElement& {
    auto mn = std::min_element(cyc.begin(), cyc.end());
    std::rotate(cyc.begin(), mn, cyc.end());
    auto it = cycle_trace.find(cyc);
    if (it != cycle_trace.end()) return it->second;
    std::vector<const Mat4*> mats;
    mats.reserve(cyc.size());
    for (int8_t i : cyc) mats.push_back(zs[i]);
    return cycle_trace.emplace(std::move(cyc), eval_mats(0, mats))
        .first->second;
  };
  std::array<int, 5> base = {0, 1, 2, 3, 4};
  FieldElement acc = f.zero();
  do {
    bool seen[5] = {};
    int ncyc = 0;
    FieldElement term = f.one();
    for (int s = 0; s < 5; ++s) {
      if (seen[s]) continue;
      ++ncyc;
      IWord cyc;
      int x = s;
      do {
        seen[x] = true;
        cyc.push_back(static_cast<int8_t>(x));
        x = base[static_cast<std::size_t>(x)];
      } while (x != s);
      term = term * trace_of_cycle(std::move(cyc));
    }
    if ((5 - ncyc) % 2 == 0)
      acc = acc + term;
    else
      acc = acc - term;
  } while (std::next_permutation(base.begin(), base.end()));
  return acc;
}

// ---- reduction --------------------------------------------------------------

TracePoly reduce_trace(const TraceWord& w) {
  const WordMode mode = w.mode();
  if (w.size() <= 4)
    return TracePoly::symbol(TraceSymbol(SymbolKind::TR, w));
  IPoly ipoly;
  {
    std::lock_guard<std::mutex> lock(reduce_shared().mu);
    std::vector<IWord> active;
    ipoly = reduce_canonical(w.letters(), static_cast<std::size_t>(-1), 4,
                             active);
  }
  TracePoly out;
  for (const auto& [mono, coeff] : ipoly) {
    TracePoly term = TracePoly::constant(coeff);
    for (const auto& sy : mono) {
      TraceWord word(std::vector<int8_t>(sy.w.begin(), sy.w.end()), mode);
      term = term * TracePoly::symbol(TraceSymbol(
                 sy.kind == 0 ? SymbolKind::TR : SymbolKind::CHI2,
                 std::move(word)));
    }
    out = out + term;
  }
  return out;
}

// ---- character field --------------------------------------------------------

CharFieldGens charfield_generators(const Mat4& g1, const Mat4& g2) {
  require_conforming(g1, g2, "charfield_generators");
  const Mat4 g2i = g2 * g2;
  CharFieldGens r;
  r.t12 = (g1 * g2).trace();
  r.c12 = chi2_of(g1 * g2);
  r.t1m2 = (g1 * g2i).trace();
  r.degree = generated_subfield_degree({r.t12, r.c12, r.t1m2});
  static const std::vector<TraceWord> ladder_words =
      canonical_words(8, WordMode::GL);
  TraceEvaluator ev(g1, g2);
  std::vector<FieldElement> traces;
  traces.reserve(ladder_words.size());
  uint32_t d6 = 0, d8 = 0;
  std::size_t idx = 0;
  for (std::size_t len : {std::size_t{6}, std::size_t{8}}) {
    while (idx < ladder_words.size() && ladder_words[idx].size() <= len) {
      traces.push_back(ev.word_trace(ladder_words[idx]));
      ++idx;
    }
    (len == 6 ? d6 : d8) = generated_subfield_degree(traces);
  }
  if (d6 != d8 || d8 != r.degree)
    throw std::runtime_error(
        "charfield_generators: sampled character field does not match the "
        "generator triple");
  return r;
}

FieldElement rho_eval(const FieldElement& x, const FieldElement& y,
                      const FieldElement& z) {
  if (!x.ctx().same_field(y.ctx()) || !x.ctx().same_field(z.ctx()))
    throw std::invalid_argument("rho_eval: arguments from different fields");
  const FieldCtx& k = x.ctx();
  auto fe = [&](long n) { return k.from_int(n); };
  const FieldElement f1 = z + x + fe(1);
  const FieldElement f2 =
      z * z + (fe(2) * x - fe(10)) * z + x * x - fe(9) * y + fe(8) * x +
      fe(7);
  return f1 * f2;
}

// ---- case classification ----------------------------------------------------

const char* to_string(ProofCase c) {
  switch (c) {
    case ProofCase::A1: return "A1";
    case ProofCase::A2a: return "A2a";
    case ProofCase::A2b: return "A2b";
    case ProofCase::B1: return "B1";
    case ProofCase::B2: return "B2";
  }
  return "?";
}

CaseReport classify_case(const Mat4& g1in, const Mat4& g2in) {
  require_conforming(g1in, g2in, "classify_case");
  const FieldCtx& base = g1in.ctx();
  Mat4 g1 = g1in, g2 = g2in;
  bool swapped = false;
  if (!minpoly_deg3(g1)) {
    std::swap(g1, g2);
    swapped = true;
  }
  if (!minpoly_deg3(g1))
    throw std::logic_error(
        "classify_case: no generator with minimal polynomial of degree 3");

  const FieldElement one = base.one();
  const FieldElement t2 = g2.trace();

  // Eigenvalue for W: 1 when tr(g2) = 1 or char 3, else a primitive cube
  // root of unity, in the base field iff q = 1 mod 3.
  const FieldCtx* K = &base;
  std::optional<Embedding> emb;
  FieldElement lam = one;
  if (base.p != 3 && !(t2 == one)) {
    uint64_t qmod3 = 1;
    for (uint32_t i = 0; i < base.m; ++i) qmod3 = qmod3 * (base.p % 3) % 3;
    if (qmod3 != 1) {
      K = &quadratic_extension(base);
      emb.emplace(base, *K);
    }
    FieldPoly f(*K, {K->one(), K->one(), K->one()});  // T^2 + T + 1
    std::vector<FieldElement> rs = roots_here(f);
    if (rs.size() != 2)
      throw std::logic_error(
          "classify_case: primitive cube root of unity not found");
    lam = rs[0];
  }

  const Mat4 G1 = emb ? map_entries(g1, *emb) : g1;
  const Mat4 G2 = emb ? map_entries(g2, *emb) : g2;
  std::vector<Vec4> W = kernel_basis(sub_scalar(G2, lam));
  if (W.size() != 2)
    throw std::logic_error(
        "classify_case: NO_EIGENSPACE (eigenspace dimension " +
        std::to_string(W.size()) + ", expected 2)");

  // Case (a) iff W meets ker(1 + g1 + g1^2) nontrivially; the intersection
  // is read off from the dependence of N w1, N w2 with N = 1 + g1 + g1^2.
  const Mat4 N = Mat4::identity(*K) + G1 + G1 * G1;
  const Vec4 t1v = mat_vec(N, W[0]), t2v = mat_vec(N, W[1]);
  std::optional<Vec4> v;
  if (vec4_is_zero(t1v)) {
    v = W[0];
  } else if (vec4_is_zero(t2v)) {
    v = W[1];
  } else {
    std::size_t lead = 0;
    while (t1v[lead].is_zero()) ++lead;
    const FieldElement mu = t2v[lead] * t1v[lead].inv();
    bool dep = true;
    for (std::size_t i = 0; i < 4; ++i)
      if (!(t2v[i] == mu * t1v[i])) dep = false;
    // N w2 = mu N w1  =>  mu w1 - w2 spans the kernel intersection.
    if (dep) v = vadd(vscale(mu, W[0]), vscale(K->from_int(-1), W[1]));
  }

  ProofCase label;
  if (!v) {
    label = (t2 == one) ? ProofCase::B1 : ProofCase::B2;
  } else {
    const Vec4 g1v = mat_vec(G1, *v);
    if (rank_of({*v, g1v}) != 2)
      throw std::logic_error("classify_case: U = <v, g1 v> is degenerate");
    std::vector<Vec4> span = {*v, g1v};
    const Mat4 h = sub_scalar(G1, K->one());
    for (int c = 0; c < 4; ++c) {
      Vec4 col;
      for (int i = 0; i < 4; ++i) col[static_cast<std::size_t>(i)] = h.at(i, c);
      span.push_back(col);
    }
    if (rank_of(span) == 2) {
      label = ProofCase::A1;
    } else {
      if (K->p != 3)
        throw std::logic_error(
            "classify_case: case A2 outside characteristic 3");
      const Vec4 g2g1v = mat_vec(G2, g1v);
      const Vec4 g1g2g1v = mat_vec(G1, g2g1v);
      label = rank_of({*v, g1v, g2g1v, g1g2g1v}) == 4 ? ProofCase::A2a
                                                      : ProofCase::A2b;
    }
  }

  const CaseTraces tv = case_traces(g1, g2);
  std::vector<std::string> bad = violated_formulas(base, label, tv);
  if (!bad.empty()) {
    std::string msg = "classify_case: formula check failed for case ";
    msg += to_string(label);
    for (const auto& b : bad) msg += " [" + b + "]";
    throw std::logic_error(msg);
  }
  return CaseReport{label, swapped, tv.t12, tv.c12, tv.t1m2};
}

}  // namespace trigen
