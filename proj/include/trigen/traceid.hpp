#pragma once

// Trace-identity calculus for pairs of order-3 elements of GL_4 / Sp_4:
// the three degree-5 Procesi specializations, the trace-word reduction
// engine that rewrites tr(w(g1, g2)) as an integer polynomial in the
// finite generator set X, the character-field generator triple
// (t_12, c_12, t_1-2) with its relation rho, and the case classifier for
// absolutely irreducible order-3 symplectic pairs.

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "trigen/gf.hpp"
#include "trigen/matsp.hpp"

namespace trigen {

// GL: cyclic words in g1^{+-1}, g2^{+-1} up to rotation. SP: additionally up
// to inversion-reversal, which preserves traces of symplectic matrices
// (tr(g^-1) = tr(g) when the characteristic polynomial is self-reciprocal).
enum class WordMode { GL, SP };

// Nonempty cyclic word over the alphabet {1, -1, 2, -2} (letter k stands for
// g_|k|^{sign k}), normalized under g^3 = 1: adjacent inverse pairs (x, -x)
// cancel and doubled letters (x, x) merge to -x, cyclically, until stable;
// the stored form is the least rotation (in SP mode, least among rotations of
// the word and of its inverted reversal) under the letter order
// 1 < -1 < 2 < -2. Normalized words are alternating, so lengths are 1 or
// even. Throws std::invalid_argument on letters outside {+-1, +-2} or when
// normalization empties the word (the identity element has no trace symbol).
class TraceWord {
 public:
  TraceWord(std::vector<int8_t> letters, WordMode mode);

  const std::vector<int8_t>& letters() const { return letters_; }
  WordMode mode() const { return mode_; }
  std::size_t size() const { return letters_.size(); }

  bool operator==(const TraceWord& o) const {
    return mode_ == o.mode_ && letters_ == o.letters_;
  }
  bool operator!=(const TraceWord& o) const { return !(*this == o); }
  bool operator<(const TraceWord& o) const;

  std::string str() const;  // "1,2,-1,2"

 private:
  std::vector<int8_t> letters_;
  WordMode mode_;
};

// TR is tr(w(g1, g2)); CHI2 is chi2(w(g1, g2)), the second coefficient of
// the characteristic polynomial (sum of principal 2x2 minors).
enum class SymbolKind { TR, CHI2 };

// Member of the generator set X: a TR symbol on a word of length <= 4 or a
// CHI2 symbol on a word of length <= 2. Longer words are rejected with
// std::invalid_argument. Note that a doubled-letter argument such as
// chi2(g1^2) normalizes to chi2(g1^-1) at the TraceWord level (g^2 = g^-1
// under g^3 = 1), so X needs no doubled symbols.
class TraceSymbol {
 public:
  TraceSymbol(SymbolKind kind, TraceWord word);

  SymbolKind kind() const { return kind_; }
  const TraceWord& word() const { return word_; }

  bool operator==(const TraceSymbol& o) const {
    return kind_ == o.kind_ && word_ == o.word_;
  }
  bool operator!=(const TraceSymbol& o) const { return !(*this == o); }
  bool operator<(const TraceSymbol& o) const;

  std::string str() const;  // "t(1,2,-1,2)" or "c2(1,2)"

 private:
  SymbolKind kind_;
  TraceWord word_;
};

// Polynomial with arbitrary-precision integer coefficients in the symbols of
// X; monomials are sorted multisets of symbols. Zero coefficients are never
// stored. Immutable value semantics; all operations return new values.
class TracePoly {
 public:
  using Monomial = std::vector<TraceSymbol>;  // kept sorted

  TracePoly() = default;
  static TracePoly constant(const mpz_class& c);
  static TracePoly symbol(const TraceSymbol& s);

  const std::map<Monomial, mpz_class>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }
  // Coefficient of the given monomial (zero if absent); the monomial is
  // sorted before lookup.
  mpz_class coeff(Monomial m) const;

  TracePoly operator+(const TracePoly& o) const;
  TracePoly operator-(const TracePoly& o) const;
  TracePoly operator*(const TracePoly& o) const;
  TracePoly scaled(const mpz_class& c) const;
  bool operator==(const TracePoly& o) const { return terms_ == o.terms_; }
  bool operator!=(const TracePoly& o) const { return !(*this == o); }

  // Evaluates at the pair (g1, g2); equivalent to TraceEvaluator(g1,
  // g2).evaluate(*this). See TraceEvaluator for the preconditions.
  FieldElement evaluate(const Mat4& g1, const Mat4& g2) const;

  // JSON list of {"monomial": ["t(1,2)", ...], "coeff": "-12"}, terms in
  // monomial order. The empty polynomial serializes as [].
  std::string to_json() const;

 private:
  std::map<Monomial, mpz_class> terms_;
};

// Evaluator for one pair (g1, g2), memoizing symbol values so that many
// polynomials over the same pair share word products. Requires g1, g2 over
// the same field with g^3 = I (throws std::invalid_argument otherwise).
// Evaluating an SP-mode symbol additionally requires both matrices
// symplectic, checked once on first use.
class TraceEvaluator {
 public:
  TraceEvaluator(Mat4 g1, Mat4 g2);

  const FieldCtx& ctx() const { return g1_.ctx(); }
  FieldElement value(const TraceSymbol& s) const;
  FieldElement evaluate(const TracePoly& p) const;
  // Direct trace of the word product, independent of the reduction engine.
  FieldElement word_trace(const TraceWord& w) const;

 private:
  Mat4 eval_letters(const std::vector<int8_t>& w) const;
  Mat4 g1_, g2_, g1i_, g2i_;
  mutable std::map<std::pair<int, std::vector<int8_t>>, FieldElement> cache_;
  mutable int sp_checked_ = 0;  // 0 unknown, 1 ok, -1 not symplectic
};

// All canonical words of length <= max_len in the given mode, sorted.
// Normal forms are alternating, so only length 1 and even lengths occur;
// enumeration is by alternating sign strings, deduplicated by
// canonicalization.
std::vector<TraceWord> canonical_words(std::size_t max_len, WordMode mode);

// The generator set X of the given mode: TR symbols on canonical words of
// length <= 4 and CHI2 symbols on canonical words of length <= 2. Cardinality
// is computed by enumeration (26 for GL, 13 for SP), never assumed.
std::vector<TraceSymbol> symbol_set(WordMode mode);

// The nine SP-mode symbols that generate the character field of an order-3
// pair: X in SP mode minus the four length-1 symbols (whose values lie in
// the prime field for order-3 symplectic elements).
std::vector<TraceSymbol> generator_set();

// One stored term of a Procesi identity: coeff times a product of t-/c2-
// factors whose letters are slot labels: +-1 and +-2 denote M1^{+-1},
// M2^{+-1}; 3 denotes the third matrix slot (never inverted). Factor words
// are cyclically reduced and rotation-canonical.
struct SlotFactor {
  SymbolKind kind;
  std::vector<int8_t> letters;
  bool operator==(const SlotFactor& o) const {
    return kind == o.kind && letters == o.letters;
  }
  bool operator<(const SlotFactor& o) const;
};
struct SlotTerm {
  mpz_class coeff;
  std::vector<SlotFactor> factors;  // sorted; empty means a constant term
};

// The stored form of identity k in {1, 2, 3}: the degree-5 trace identity
// obtained from the Sym_5 antisymmetrization by specializing (Z4, Z5) to
// (M1, M2), (M1^-1, M2), (M1^-1, M2^-1) respectively and rewriting repeated
// squares via tr(V^2) = tr(V)^2 - 2 chi2(V). Each identity vanishes on every
// triple of invertible 4x4 matrices. Construction is checked at first use
// (term counts 30/42/59, unit target coefficients); failures throw
// std::logic_error. Throws std::invalid_argument for k outside {1, 2, 3}.
const std::vector<SlotTerm>& procesi_identity(int k);

// Evaluates the full left-hand side of identity k at (M1, M2, M3): always
// zero. Requires a shared field and invertible inputs (std::invalid_argument
// otherwise).
FieldElement procesi_lhs(int k, const Mat4& m1, const Mat4& m2,
                         const Mat4& m3);

// The signed permutation sum sum_{sigma in Sym_5} sgn(sigma)
// tr_sigma(Z1..Z5), where tr_sigma is the product of traces over the cycles
// of sigma (fixed points contributing tr(Z_i)): identically zero on 4x4
// matrices. Requires a shared field.
FieldElement procesi_sym5(const Mat4& z1, const Mat4& z2, const Mat4& z3,
                          const Mat4& z4, const Mat4& z5);

// Rewrites tr(w(g1, g2)) for order-3 g1, g2 as a TracePoly over X: atomic
// for |w| <= 4; otherwise locates one of the patterns (s,t,s,t),
// (s,t,-s,t), (s,t,-s,-t) — in that order of preference, scanning rotations
// of the canonical form — and applies the corresponding identity solved for
// its unit-coefficient target term, recursing on the remaining words.
// Progress is enforced by a lexicographic metric (word length, pattern
// level) that every recursion strictly decreases; violations, a length >= 5
// word without any pattern, or a non-unit target coefficient throw
// std::logic_error (bug sentinels — the underlying combinatorial claims say
// they cannot happen). Results are memoized process-wide; safe for
// concurrent use. GL input yields GL-mode symbols; SP input reduces the
// same way and re-canonicalizes the output symbols in SP mode.
TracePoly reduce_trace(const TraceWord& w);

// Character-field generators of an absolutely irreducible order-3 symplectic
// pair: t12 = tr(g1 g2), c12 = chi2(g1 g2), t1m2 = tr(g1 g2^-1). degree is
// the degree over F_p of the subfield they generate, cross-checked against
// the character field sampled to stability: the subfield generated by the
// traces of all canonical words of length <= L must have the same degree at
// L = 6 and L = 8 and match the triple (std::runtime_error otherwise).
// Preconditions (std::invalid_argument): shared field, both symplectic of
// order exactly 3, pair absolutely irreducible.
struct CharFieldGens {
  FieldElement t12, c12, t1m2;
  uint32_t degree = 0;
};
CharFieldGens charfield_generators(const Mat4& g1, const Mat4& g2);

// rho(X, Y, Z) = (Z + X + 1)(Z^2 + (2X - 10)Z + X^2 - 9Y + 8X + 7); vanishes
// on (t12, c12, t1m2) of every absolutely irreducible order-3 symplectic
// pair. Requires a shared context (std::invalid_argument).
FieldElement rho_eval(const FieldElement& x, const FieldElement& y,
                      const FieldElement& z);

// The five cases of the order-3 pair analysis. With W the 2-dimensional
// eigenspace of g2 (eigenvalue 1 when tr(g2) = 1 or char 3, else a primitive
// cube root of unity, over a quadratic extension if needed), case A holds
// iff W meets ker(1 + g1 + g1^2) nontrivially, with v spanning the
// intersection and U = <v, g1 v>:
//   A1: (g1 - 1)V is contained in U.
//   A2a/A2b (char 3 only): {v, g1 v, g2 g1 v, g1 g2 g1 v} independent / not.
//   B1/B2: case B with tr(g2) = 1 / tr(g2) = -2.
enum class ProofCase { A1, A2a, A2b, B1, B2 };
const char* to_string(ProofCase c);

// swapped records whether the roles of the inputs were exchanged so that g1
// has minimal polynomial of degree 3 (always possible for an absolutely
// irreducible pair); the traces are those of the pair in classified order.
struct CaseReport {
  ProofCase label;
  bool swapped = false;
  FieldElement t12, c12, t1m2;
};

// Classifies a conforming pair (same preconditions as charfield_generators)
// into its proof case and verifies the published per-case formula list for
// t/c values of words in the classified pair by direct evaluation, plus the
// universal relations rho = 0, t1212 = t12^2 - 2 c12 and tr(g1 g2^-1 g1^-1
// g2^-1) = tr(g1 g2 g1^-1 g2). Throws std::invalid_argument on precondition
// violations, std::logic_error on internal impossibilities (no degree-3
// minimal polynomial, NO_EIGENSPACE: no 2-dimensional eigenspace, case A2
// away from characteristic 3, or any formula violation).
CaseReport classify_case(const Mat4& g1, const Mat4& g2);

}  // namespace trigen
