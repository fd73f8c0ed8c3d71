#include "doctest.h"
#include "trigen/traceid.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "trigen/matsp.hpp"

using namespace trigen;

namespace {

TraceWord gw(std::vector<int8_t> ls) { return TraceWord(std::move(ls), WordMode::GL); }
TraceWord sw(std::vector<int8_t> ls) { return TraceWord(std::move(ls), WordMode::SP); }

TraceSymbol tsym(std::vector<int8_t> ls, WordMode m = WordMode::GL) {
  return TraceSymbol(SymbolKind::TR, TraceWord(std::move(ls), m));
}
TraceSymbol csym(std::vector<int8_t> ls, WordMode m = WordMode::GL) {
  return TraceSymbol(SymbolKind::CHI2, TraceWord(std::move(ls), m));
}

// Random order-3 element of GL_4: diag(1, w, w, w^2) conjugated by a random
// invertible matrix, where w is a primitive cube root of unity in the field
// (requires q = 1 mod 3).
Mat4 random_gl_order3(const FieldCtx& k, Rng& rng, const FieldElement& w) {
  while (true) {
    Mat4 c(k);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) c.set(i, j, k.random_element(rng));
    if (c.det().is_zero()) continue;
    Mat4 d(k);
    d.set(0, 0, k.one());
    d.set(1, 1, w);
    d.set(2, 2, w);
    d.set(3, 3, w * w);
    return c * d * c.inverse();
  }
}

FieldElement cube_root_of_unity(const FieldCtx& k) {
  Rng r(5);
  while (true) {
    FieldElement x = k.random_element(r);
    if (!x.is_zero() && ((x * x) + x + k.one()).is_zero()) return x;
  }
}

Mat4 random_invertible(const FieldCtx& k, Rng& rng) {
  while (true) {
    Mat4 m(k);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m.set(i, j, k.random_element(rng));
    if (!m.det().is_zero()) return m;
  }
}

// Product of the word letters in the four slot matrices (1 -> m1, -1 -> m1i,
// 2 -> m2, -2 -> m2i), evaluated left to right; independent of the library's
// evaluator internals.
Mat4 word_product(const std::vector<int8_t>& w, const Mat4& m1, const Mat4& m2) {
  Mat4 m1i = m1.inverse(), m2i = m2.inverse();
  Mat4 r = Mat4::identity(m1.ctx());
  for (int8_t l : w) r = r * (l == 1 ? m1 : l == -1 ? m1i : l == 2 ? m2 : m2i);
  return r;
}

// Coefficient of the unique single-t-factor term of identity k whose word is
// a cyclic rotation of `w`; zero if no such term exists.
mpz_class anchor_coeff(int k, const std::vector<int8_t>& w) {
  for (const SlotTerm& t : procesi_identity(k)) {
    if (t.factors.size() != 1 || t.factors[0].kind != SymbolKind::TR) continue;
    const auto& L = t.factors[0].letters;
    if (L.size() != w.size()) continue;
    for (std::size_t r = 0; r < L.size(); ++r) {
      bool eq = true;
      for (std::size_t i = 0; i < L.size() && eq; ++i)
        eq = L[(r + i) % L.size()] == w[i];
      if (eq) return t.coeff;
    }
  }
  return 0;
}

// ---- exact rational 4x4 arithmetic (independent oracle) --------------------

using RMat = std::array<std::array<mpq_class, 4>, 4>;

RMat rmul(const RMat& a, const RMat& b) {
  RMat r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      mpq_class s = 0;
      for (int l = 0; l < 4; ++l) s += a[i][l] * b[l][j];
      r[i][j] = s;
    }
  return r;
}

mpq_class rtrace(const RMat& a) { return a[0][0] + a[1][1] + a[2][2] + a[3][3]; }

mpq_class rchi2(const RMat& a) {
  mpq_class s = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) s += a[i][i] * a[j][j] - a[i][j] * a[j][i];
  return s;
}

std::optional<RMat> rinv(RMat a) {
  RMat inv{};
  for (int i = 0; i < 4; ++i) inv[i][i] = 1;
  for (int c = 0; c < 4; ++c) {
    int piv = -1;
    for (int r = c; r < 4 && piv < 0; ++r)
      if (a[r][c] != 0) piv = r;
    if (piv < 0) return std::nullopt;
    std::swap(a[c], a[piv]);
    std::swap(inv[c], inv[piv]);
    mpq_class d = a[c][c];
    for (int j = 0; j < 4; ++j) {
      a[c][j] /= d;
      inv[c][j] /= d;
    }
    for (int r = 0; r < 4; ++r) {
      if (r == c || a[r][c] == 0) continue;
      mpq_class f = a[r][c];
      for (int j = 0; j < 4; ++j) {
        a[r][j] -= f * a[c][j];
        inv[r][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

RMat random_rmat(Rng& rng) {
  while (true) {
    RMat m{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        m[i][j] = static_cast<long>(rng.below(7)) - 3;
    if (rinv(m)) return m;
  }
}

mpq_class rational_identity_value(int k, const RMat& m1, const RMat& m2,
                                  const RMat& m3) {
  RMat m1i = *rinv(m1), m2i = *rinv(m2);
  auto slot = [&](int8_t l) -> const RMat& {
    switch (l) {
      case 1: return m1;
      case -1: return m1i;
      case 2: return m2;
      case -2: return m2i;
      default: return m3;
    }
  };
  mpq_class acc = 0;
  for (const SlotTerm& t : procesi_identity(k)) {
    mpq_class term(t.coeff);
    for (const SlotFactor& f : t.factors) {
      RMat p = slot(f.letters[0]);
      for (std::size_t i = 1; i < f.letters.size(); ++i)
        p = rmul(p, slot(f.letters[i]));
      term *= f.kind == SymbolKind::TR ? rtrace(p) : rchi2(p);
    }
    acc += term;
  }
  return acc;
}

std::set<std::string> symbol_strs(const std::vector<TraceSymbol>& v) {
  std::set<std::string> s;
  for (const auto& x : v) s.insert(x.str());
  return s;
}

}  // namespace

TEST_CASE("trace words normalize under the order-3 relations") {
  CHECK(gw({1}).str() == "1");
  CHECK(gw({1}).size() == 1);
  CHECK(gw({2, 1}).str() == "1,2");           // least rotation
  CHECK(gw({1, 1}).str() == "-1");            // g1^2 = g1^-1
  CHECK(gw({-2, -2}).str() == "2");           // g2^-2 = g2
  CHECK(gw({1, 2, 2, 1}).str() == "-1,-2");   // doubled letters merge
  CHECK(gw({2, -1, 2, 1, 1}) == gw({2, -1, 2, -1}));  // trailing merge + wrap
  CHECK(gw({1, 2, 1, 2, 1}) == gw({1, 2, -1, 2}));    // cyclic wrap merge
  CHECK(sw({1}).str() == "1");
  CHECK(sw({-1}).str() == "1");               // inverted reversal in SP mode
  CHECK(sw({-2, -1}).str() == "1,2");
  CHECK(gw({-2, -1}).str() == "-1,-2");       // but not in GL mode
  CHECK(sw({1, -2}) == sw({-1, 2}));
  CHECK(gw({1, -2}) != gw({-1, 2}));

  CHECK_THROWS_AS(gw({}), std::invalid_argument);
  CHECK_THROWS_AS(gw({0}), std::invalid_argument);
  CHECK_THROWS_AS(gw({3}), std::invalid_argument);
  CHECK_THROWS_AS(gw({1, -5}), std::invalid_argument);
  CHECK_THROWS_AS(gw({1, -1}), std::invalid_argument);        // reduces empty
  CHECK_THROWS_AS(gw({1, 2, -2, -1}), std::invalid_argument); // reduces empty

  // rotations (and SP inverted reversals) are the same cyclic word
  const std::vector<int8_t> base = {1, 2, -1, 2, 1, -2};
  for (std::size_t r = 0; r < base.size(); ++r) {
    std::vector<int8_t> rot(base.begin() + r, base.end());
    rot.insert(rot.end(), base.begin(), base.begin() + r);
    CHECK(gw(rot) == gw(base));
    CHECK(sw(rot) == sw(base));
  }
  std::vector<int8_t> invrev(base.rbegin(), base.rend());
  for (auto& l : invrev) l = static_cast<int8_t>(-l);
  CHECK(sw(invrev) == sw(base));
}

TEST_CASE("trace symbols validate their word lengths") {
  CHECK(tsym({1}).str() == "t(1)");
  CHECK(tsym({1, 2, -1, 2}).str() == "t(1,2,-1,2)");
  CHECK(csym({1, 2}).str() == "c2(1,2)");
  CHECK(csym({1, 1}).str() == "c2(-1)");  // chi2(g1^2) = chi2(g1^-1)
  CHECK_THROWS_AS(csym({1, 2, 1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(tsym({1, 2, 1, 2, 1, -2}), std::invalid_argument);
  CHECK(tsym({1}) != csym({1}));
  CHECK(tsym({1, 2}) == tsym({2, 1}));
}

TEST_CASE("trace polynomial algebra and JSON serialization") {
  TracePoly zero;
  CHECK(zero.is_zero());
  CHECK(zero.to_json() == "[]");
  CHECK(TracePoly::constant(0).is_zero());
  CHECK(TracePoly::constant(-12).to_json() ==
        "[{\"monomial\":[],\"coeff\":\"-12\"}]");

  TracePoly t1 = TracePoly::symbol(tsym({1}));
  TracePoly t2 = TracePoly::symbol(tsym({2}));
  CHECK(t1.to_json() == "[{\"monomial\":[\"t(1)\"],\"coeff\":\"1\"}]");

  TracePoly p = t1 * t2 - t2 * t1;
  CHECK(p.is_zero());  // commutative product

  TracePoly q = (t1 + t2) * (t1 - t2);  // t1^2 - t2^2
  CHECK(q.term_count() == 2);
  CHECK(q.coeff({tsym({1}), tsym({1})}) == 1);
  CHECK(q.coeff({tsym({2}), tsym({2})}) == -1);
  CHECK(q.coeff({tsym({1}), tsym({2})}) == 0);
  CHECK(q.scaled(3).coeff({tsym({1}), tsym({1})}) == 3);
  CHECK(q.scaled(0).is_zero());
  CHECK(q - q == zero);
  CHECK(q + q == q.scaled(2));

  // unsorted monomial queries are sorted before lookup
  TracePoly r = TracePoly::symbol(tsym({1})) * TracePoly::symbol(csym({1, 2}));
  CHECK(r.coeff({csym({1, 2}), tsym({1})}) == 1);
  CHECK(r.coeff({tsym({1}), csym({1, 2})}) == 1);
}

TEST_CASE("generator set enumeration has the computed cardinalities") {
  // per-length canonical counts, GL mode
  const std::map<std::size_t, std::size_t> expect_gl = {
      {1, 4}, {2, 4}, {4, 10}, {6, 24}, {8, 70}, {10, 208}};
  auto all10 = canonical_words(10, WordMode::GL);
  std::map<std::size_t, std::size_t> by_len;
  for (const auto& w : all10) ++by_len[w.size()];
  CHECK(by_len == expect_gl);
  CHECK(all10.size() == 320);
  CHECK(canonical_words(8, WordMode::GL).size() == 112);

  // SP mode collapses inverted reversals
  const std::map<std::size_t, std::size_t> expect_sp_lens = {
      {1, 2}, {2, 2}, {4, 5}};
  auto sp4 = canonical_words(4, WordMode::SP);
  std::map<std::size_t, std::size_t> sp_by_len;
  for (const auto& w : sp4) ++sp_by_len[w.size()];
  CHECK(sp_by_len == expect_sp_lens);

  // the SP set is exactly the GL set re-canonicalized in SP mode
  std::set<std::string> sp_from_gl;
  for (const auto& w : canonical_words(6, WordMode::GL))
    sp_from_gl.insert(TraceWord(w.letters(), WordMode::SP).str());
  std::set<std::string> sp_direct;
  for (const auto& w : canonical_words(6, WordMode::SP))
    sp_direct.insert(w.str());
  CHECK(sp_from_gl == sp_direct);

  CHECK(symbol_set(WordMode::GL).size() == 26);
  CHECK(symbol_set(WordMode::SP).size() == 13);

  const std::set<std::string> expected_gens = {
      "t(1,2)",        "t(1,-2)",       "t(1,2,1,2)",
      "t(1,2,1,-2)",   "t(1,2,-1,2)",   "t(1,2,-1,-2)",
      "t(1,-2,1,-2)",  "c2(1,2)",       "c2(1,-2)"};
  CHECK(symbol_strs(generator_set()) == expected_gens);
}

TEST_CASE("procesi identities carry the anchored grouping structure") {
  CHECK(procesi_identity(1).size() == 30);
  CHECK(procesi_identity(2).size() == 42);
  CHECK(procesi_identity(3).size() == 59);
  CHECK_THROWS_AS(procesi_identity(0), std::invalid_argument);
  CHECK_THROWS_AS(procesi_identity(4), std::invalid_argument);

  // the unit-coefficient target terms the reduction solves for, plus the
  // leading terms of the published groupings
  CHECK(anchor_coeff(1, {1, 2, 1, 2, 3}) == 1);
  CHECK(anchor_coeff(1, {2, 1, 2, 1, 3}) == 1);
  CHECK(anchor_coeff(1, {1, 1, 2, 2, 3}) == 1);
  CHECK(anchor_coeff(2, {1, 2, -1, 2, 3}) == 1);
  CHECK(anchor_coeff(2, {-1, 2, 1, 2, 3}) == 1);
  CHECK(anchor_coeff(2, {-1, 2, 2, 1, 3}) == 1);
  CHECK(anchor_coeff(2, {2, -1, 2, 1, 3}) == 1);
  CHECK(anchor_coeff(3, {1, 2, -1, -2, 3}) == 1);
  CHECK(anchor_coeff(3, {2, 1, -2, -1, 3}) == 1);
  CHECK(anchor_coeff(3, {-2, 1, 2, -1, 3}) == 1);

  // structural invariants: each term mentions the third slot exactly once,
  // only inside t-factors; c2-factors have length <= 2 over {+-1, +-2}
  for (int k = 1; k <= 3; ++k) {
    for (const SlotTerm& t : procesi_identity(k)) {
      CHECK(t.coeff != 0);
      int threes = 0;
      for (const SlotFactor& f : t.factors) {
        CHECK(!f.letters.empty());
        for (int8_t l : f.letters) {
          bool ok = l == 1 || l == -1 || l == 2 || l == -2 || l == 3;
          CHECK(ok);
          if (l == 3) ++threes;
        }
        if (f.kind == SymbolKind::CHI2) {
          CHECK(f.letters.size() <= 2);
          CHECK(std::count(f.letters.begin(), f.letters.end(), 3) == 0);
        }
      }
      CHECK(threes == 1);
    }
  }
}

TEST_CASE("procesi identities vanish identically over exact rationals") {
  Rng rng(271828);
  for (int k = 1; k <= 3; ++k)
    for (int s = 0; s < 12; ++s) {
      RMat m1 = random_rmat(rng), m2 = random_rmat(rng), m3 = random_rmat(rng);
      CHECK(rational_identity_value(k, m1, m2, m3) == 0);
    }
}

TEST_CASE("procesi lhs and sym5 vanish over several characteristics") {
  std::vector<FieldCtx> fields;
  fields.push_back(make_prime(7));
  fields.push_back(make_prime(13));
  fields.push_back(make_prime(101));
  fields.push_back(make_ext(5, 2, 11));  // F_25
  fields.push_back(make_ext(2, 2, 11));  // F_4

  for (const FieldCtx& k : fields) {
    Mat4 I = Mat4::identity(k);
    for (int kk = 1; kk <= 3; ++kk) CHECK(procesi_lhs(kk, I, I, I).is_zero());
    CHECK(procesi_sym5(I, I, I, I, I).is_zero());

    Rng rng(k.p * 1000 + k.m);
    for (int s = 0; s < 40; ++s) {
      Mat4 m1 = random_invertible(k, rng), m2 = random_invertible(k, rng),
           m3 = random_invertible(k, rng);
      for (int kk = 1; kk <= 3; ++kk)
        CHECK(procesi_lhs(kk, m1, m2, m3).is_zero());
      // the raw antisymmetrization vanishes on arbitrary quintuples, and in
      // particular on the three specializations underlying the identities
      Mat4 m4 = random_invertible(k, rng), m5 = random_invertible(k, rng);
      CHECK(procesi_sym5(m1, m2, m3, m4, m5).is_zero());
      CHECK(procesi_sym5(m1, m2, m3, m1, m2).is_zero());
      CHECK(procesi_sym5(m1, m2, m3, m1.inverse(), m2).is_zero());
      CHECK(procesi_sym5(m1, m2, m3, m1.inverse(), m2.inverse()).is_zero());
    }
  }

  // error paths
  FieldCtx k7 = make_prime(7);
  Mat4 I7 = Mat4::identity(k7), Z7(k7);
  CHECK_THROWS_AS(procesi_lhs(0, I7, I7, I7), std::invalid_argument);
  CHECK_THROWS_AS(procesi_lhs(1, Z7, I7, I7), std::invalid_argument);
  FieldCtx k13 = make_prime(13);
  CHECK_THROWS_AS(procesi_lhs(1, Mat4::identity(k13), I7, I7),
                  std::invalid_argument);
  CHECK_THROWS_AS(procesi_sym5(I7, I7, I7, I7, Mat4::identity(k13)),
                  std::invalid_argument);
}

TEST_CASE("chi2 satisfies the square-trace rewrite on arbitrary matrices") {
  FieldCtx k = make_prime(13);
  Rng rng(99);
  for (int s = 0; s < 200; ++s) {
    Mat4 m(k);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m.set(i, j, k.random_element(rng));
    CHECK((m * m).trace() == m.trace() * m.trace() - k.from_int(2) * chi2_of(m));
  }
}

TEST_CASE("trace reduction is atomic on short words and exact on the spec samples") {
  TracePoly p1 = reduce_trace(gw({1}));
  CHECK(p1.term_count() == 1);
  CHECK(p1.coeff({tsym({1})}) == 1);

  // [1,2,1,2,1] normalizes to the atomic length-4 word t(1,2,-1,2)
  TracePoly p5 = reduce_trace(gw({1, 2, 1, 2, 1}));
  CHECK(p5.term_count() == 1);
  CHECK(p5.coeff({tsym({1, 2, -1, 2})}) == 1);

  TracePoly p8 = reduce_trace(gw({1, 2, 1, 2, 1, 2, 1, 2}));
  CHECK(p8.term_count() > 1);  // genuine reduction output

  struct QSpec {
    FieldCtx k;
    int pairs;
  };
  std::vector<QSpec> qs;
  qs.push_back({make_prime(7), 1000});
  qs.push_back({make_prime(13), 1000});
  qs.push_back({make_ext(5, 2, 11), 1000});
  for (const auto& [k, pairs] : qs) {
    FieldElement w = cube_root_of_unity(k);
    Rng rng(4242 + k.p);
    int bad5 = 0, bad8 = 0;
    for (int t = 0; t < pairs; ++t) {
      Mat4 a = random_gl_order3(k, rng, w), b = random_gl_order3(k, rng, w);
      TraceEvaluator ev(a, b);
      Mat4 ab = a * b;
      if (!(ev.evaluate(p5) == (ab * ab * a).trace())) ++bad5;
      if (!(ev.evaluate(p8) == (ab * ab * ab * ab).trace())) ++bad8;
    }
    CHECK(bad5 == 0);
    CHECK(bad8 == 0);
  }
}

TEST_CASE("trace reduction matches direct traces on all canonical words through length 10") {
  auto words = canonical_words(10, WordMode::GL);
  REQUIRE(words.size() == 320);
  std::vector<TracePoly> polys;
  polys.reserve(words.size());
  for (const auto& w : words) {
    TracePoly p = reduce_trace(w);
    CHECK(!p.is_zero());
    polys.push_back(std::move(p));
  }

  std::vector<FieldCtx> fields;
  fields.push_back(make_prime(7));
  fields.push_back(make_prime(13));
  fields.push_back(make_ext(5, 2, 11));
  for (const FieldCtx& k : fields) {
    FieldElement w = cube_root_of_unity(k);
    Rng rng(777 + k.p);
    for (int t = 0; t < 2; ++t) {
      Mat4 a = random_gl_order3(k, rng, w), b = random_gl_order3(k, rng, w);
      TraceEvaluator ev(a, b);
      int bad = 0;
      for (std::size_t i = 0; i < words.size(); ++i)
        if (!(ev.evaluate(polys[i]) == ev.word_trace(words[i]))) ++bad;
      CHECK(bad == 0);
    }
  }
}

TEST_CASE("trace reduction handles words beyond the enumerated lengths") {
  // alternating length-12 words exercise deeper recursion than the length-10
  // sweep; values are checked against direct products
  std::vector<std::vector<int8_t>> words = {
      {1, 2, 1, 2, 1, 2, 1, 2, 1, 2, 1, 2},
      {1, 2, -1, 2, 1, -2, -1, 2, 1, 2, -1, -2},
      {1, -2, 1, 2, -1, 2, -1, -2, 1, -2, -1, 2},
  };
  FieldCtx k = make_prime(7);
  FieldElement w3 = cube_root_of_unity(k);
  Rng rng(31337);
  for (const auto& ls : words) {
    TraceWord w = gw(ls);
    TracePoly p = reduce_trace(w);
    for (int t = 0; t < 5; ++t) {
      Mat4 a = random_gl_order3(k, rng, w3), b = random_gl_order3(k, rng, w3);
      TraceEvaluator ev(a, b);
      CHECK(ev.evaluate(p) == word_product(ls, a, b).trace());
    }
  }
}

TEST_CASE("symplectic-mode reduction collapses symbols and evaluates exactly") {
  auto words = canonical_words(8, WordMode::SP);
  std::vector<TracePoly> polys;
  for (const auto& w : words) polys.push_back(reduce_trace(w));

  // a reduced SP polynomial only mentions SP-mode symbols
  for (const auto& p : polys)
    for (const auto& [m, c] : p.terms())
      for (const auto& s : m) CHECK(s.word().mode() == WordMode::SP);

  for (uint64_t q : {5ull, 7ull}) {
    FieldCtx k = make_sp4_field(q);
    Rng rng(6060 + q);
    int pairs = 0;
    while (pairs < 4) {
      Mat4 a = random_order3(k, rng), b = random_order3(k, rng);
      if (!is_absolutely_irreducible(a, b)) continue;
      ++pairs;
      TraceEvaluator ev(a, b);
      for (std::size_t i = 0; i < words.size(); ++i)
        CHECK(ev.evaluate(polys[i]) == ev.word_trace(words[i]));
    }
  }

  // SP symbols on a non-symplectic pair are rejected at evaluation time
  FieldCtx k7 = make_prime(7);
  FieldElement w3 = cube_root_of_unity(k7);
  Rng rng(8);
  Mat4 a = random_gl_order3(k7, rng, w3), b = random_gl_order3(k7, rng, w3);
  REQUIRE(!is_symplectic(a));
  TraceEvaluator ev(a, b);
  CHECK_THROWS_AS(ev.value(tsym({1, 2}, WordMode::SP)), std::invalid_argument);
  CHECK_THROWS_AS(ev.word_trace(sw({1, 2})), std::invalid_argument);
  CHECK(ev.value(tsym({1, 2})) == (a * b).trace());  // GL mode still fine
}

TEST_CASE("trace evaluator validates its inputs") {
  FieldCtx k7 = make_prime(7);
  FieldCtx k13 = make_prime(13);
  Mat4 I7 = Mat4::identity(k7);
  CHECK_THROWS_AS(TraceEvaluator(I7, Mat4::identity(k13)),
                  std::invalid_argument);
  Mat4 m(k7);
  for (int i = 0; i < 4; ++i) m.set(i, i, k7.from_int(2));  // order 3? 2^3=1 mod 7
  // diag(2,...) has 2^3 = 8 = 1 mod 7: order 3, fine
  CHECK_NOTHROW(TraceEvaluator(I7, m));
  Mat4 bad(k7);
  for (int i = 0; i < 4; ++i) bad.set(i, i, k7.from_int(3));  // 3^3 = 27 = 6 != 1
  CHECK_THROWS_AS(TraceEvaluator(I7, bad), std::invalid_argument);

  // order-3 words of g1 g2 satisfy tr((g1 g2)^2) = t12^2 - 2 c12
  FieldElement w3 = cube_root_of_unity(k7);
  Rng rng(55);
  for (int t = 0; t < 50; ++t) {
    Mat4 a = random_gl_order3(k7, rng, w3), b = random_gl_order3(k7, rng, w3);
    TraceEvaluator ev(a, b);
    FieldElement t12 = ev.value(tsym({1, 2}));
    FieldElement c12 = ev.value(csym({1, 2}));
    CHECK(ev.value(tsym({1, 2, 1, 2})) == t12 * t12 - k7.from_int(2) * c12);
  }
}

TEST_CASE("rho evaluation matches its closed form") {
  FieldCtx k7 = make_prime(7);
  FieldCtx k11 = make_prime(11);
  CHECK(rho_eval(k7.zero(), k7.zero(), k7.zero()).is_zero());     // 1 * 7 = 0
  CHECK(rho_eval(k11.zero(), k11.zero(), k11.zero()) == k11.from_int(7));

  Rng rng(12);
  for (int t = 0; t < 100; ++t) {
    FieldElement x = k11.random_element(rng), y = k11.random_element(rng);
    // z = -x - 1 kills the linear factor
    CHECK(rho_eval(x, y, k11.zero() - x - k11.one()).is_zero());
  }
  CHECK_THROWS_AS(rho_eval(k7.zero(), k11.zero(), k11.zero()),
                  std::invalid_argument);
}

TEST_CASE("character field generators: degree cross-check and known pairs") {
  // q = 4: the first conforming pair in the frozen stream generates the full
  // group, so its character field is all of F_4
  FieldCtx k4 = make_ext(2, 2, 7777);
  Rng rng(20260819 + 4);
  int conf = 0;
  bool saw_deg1 = false, saw_deg2 = false;
  std::optional<CharFieldGens> first;
  std::optional<Mat4> fg1, fg2;
  for (int it = 0; it < 400 && conf < 40; ++it) {
    Mat4 g1 = random_order3(k4, rng), g2 = random_order3(k4, rng);
    if (!is_absolutely_irreducible(g1, g2)) continue;
    ++conf;
    CharFieldGens cf = charfield_generators(g1, g2);
    CHECK(rho_eval(cf.t12, cf.c12, cf.t1m2).is_zero());
    if (cf.degree == 1) saw_deg1 = true;
    if (cf.degree == 2) saw_deg2 = true;
    if (!first) {
      first = cf;
      fg1 = g1;
      fg2 = g2;
    }
  }
  CHECK(conf == 40);
  CHECK(saw_deg1);
  CHECK(saw_deg2);
  REQUIRE(first.has_value());
  CHECK(group_order(*fg1, *fg2) == sp4_order(4));
  CHECK(first->degree == 2);

  // q = 5: the (3,3,10) census witness generates Sp_4(5); its traces lie in
  // the prime field
  FieldCtx k5 = make_sp4_field(5);
  CensusResult cr = census_search(k5, 3, 3, 10, 7);
  REQUIRE(cr.found);
  CharFieldGens cf5 = charfield_generators(*cr.g1, *cr.g2);
  CHECK(cf5.degree == 1);
  CHECK(rho_eval(cf5.t12, cf5.c12, cf5.t1m2).is_zero());

  // precondition violations
  FieldCtx k7 = make_sp4_field(7);
  Rng r7(3);
  Mat4 g = random_order3(k7, r7);
  CHECK_THROWS_AS(charfield_generators(g, g), std::invalid_argument);  // reducible
  FieldElement w3 = cube_root_of_unity(make_prime(7));
  Rng r8(4);
  Mat4 n1 = random_gl_order3(k7, r8, w3), n2 = random_gl_order3(k7, r8, w3);
  if (!is_symplectic(n1) || !is_symplectic(n2))
    CHECK_THROWS_AS(charfield_generators(n1, n2), std::invalid_argument);
  CHECK_THROWS_AS(charfield_generators(Mat4::identity(k7), g),
                  std::invalid_argument);  // order 1
}

TEST_CASE("case classification reproduces the frozen sampling census") {
  struct Frozen {
    uint64_t q;
    FieldCtx k;
    int conforming, swaps, a1, b1, b2;
  };
  std::vector<Frozen> frozen;
  frozen.push_back({4, make_ext(2, 2, 7777), 91, 29, 7, 15, 69});
  frozen.push_back({5, make_prime(5), 266, 88, 14, 52, 200});
  frozen.push_back({7, make_prime(7), 156, 61, 4, 28, 124});
  frozen.push_back({13, make_prime(13), 213, 68, 8, 64, 141});

  for (const auto& fz : frozen) {
    CAPTURE(fz.q);
    Rng rng(20260819 + fz.q);
    int conforming = 0, swaps = 0;
    std::map<ProofCase, int> labels;
    for (int it = 0; it < 400; ++it) {
      Mat4 g1 = random_order3(fz.k, rng);
      Mat4 g2 = random_order3(fz.k, rng);
      if (!is_absolutely_irreducible(g1, g2)) continue;
      ++conforming;
      CaseReport rep = classify_case(g1, g2);  // formula lists verified inside
      ++labels[rep.label];
      if (rep.swapped) ++swaps;
      CHECK(rho_eval(rep.t12, rep.c12, rep.t1m2).is_zero());
      const FieldCtx& k = fz.k;
      FieldElement x = rep.t12, y = rep.c12, z = rep.t1m2;
      if (rep.label == ProofCase::A1) {  // the published case-(a.1) values
        CHECK(z == k.zero() - x - k.from_int(4));
        CHECK(y == k.from_int(2) * x + k.from_int(7));
      }
      if (rep.label == ProofCase::B1) {  // the published case-(b) relation
        CHECK(z * z + (k.from_int(2) * x - k.from_int(10)) * z + x * x -
                  k.from_int(9) * y + k.from_int(8) * x + k.from_int(7) ==
              k.zero());
      }
    }
    CHECK(conforming == fz.conforming);
    CHECK(swaps == fz.swaps);
    CHECK(labels[ProofCase::A1] == fz.a1);
    CHECK(labels[ProofCase::B1] == fz.b1);
    CHECK(labels[ProofCase::B2] == fz.b2);
    CHECK(labels[ProofCase::A2a] == 0);  // characteristic-3 cases never occur
    CHECK(labels[ProofCase::A2b] == 0);  // away from characteristic 3
  }

  // characteristic 3: no absolutely irreducible order-3 pairs exist at all,
  // so the A2 subcases are unobservable; verified by exhaustive-ish sampling
  for (uint64_t q : {3ull, 9ull}) {
    FieldCtx k = make_sp4_field(q);
    Rng rng(20260819 + q);
    int conforming = 0;
    for (int it = 0; it < 400; ++it) {
      Mat4 g1 = random_order3(k, rng), g2 = random_order3(k, rng);
      if (is_absolutely_irreducible(g1, g2)) ++conforming;
    }
    CHECK(conforming == 0);
  }

  CHECK(std::string(to_string(ProofCase::A1)) == "A1");
  CHECK(std::string(to_string(ProofCase::A2a)) == "A2a");
  CHECK(std::string(to_string(ProofCase::A2b)) == "A2b");
  CHECK(std::string(to_string(ProofCase::B1)) == "B1");
  CHECK(std::string(to_string(ProofCase::B2)) == "B2");

  // precondition violations mirror charfield_generators
  FieldCtx k7 = make_sp4_field(7);
  Rng r7(3);
  Mat4 g = random_order3(k7, r7);
  CHECK_THROWS_AS(classify_case(g, g), std::invalid_argument);
}
