#pragma once

// 4x4 matrix groups over finite fields: characteristic-polynomial
// coefficients, the symplectic form, word evaluation, element orders,
// absolute irreducibility, group closure / order computation, and
// (3,3,c)-style generation searches in Sp_4(q).
//
// Convention: matrices act on column vectors, entry (i, j) is the e_i
// coefficient of the image of e_j. The fixed symplectic basis is
// (e1, f1, e2, f2) with (e1,f1) = (e2,f2) = 1.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trigen/gf.hpp"

namespace trigen {

class Mat4 {
public:
  explicit Mat4(const FieldCtx& ctx);  // zero matrix
  static Mat4 identity(const FieldCtx& ctx);
  // rows[i][j] is entry (i, j) as a signed integer, reduced into the field.
  static Mat4 from_rows(const FieldCtx& ctx,
                        const std::array<std::array<long, 4>, 4>& rows);

  const FieldCtx& ctx() const { return *ctx_; }
  FieldElement at(int i, int j) const;
  void set(int i, int j, const FieldElement& v);

  uint64_t* entry(int i, int j) { return a_.data() + (4 * i + j) * ctx_->m; }
  const uint64_t* entry(int i, int j) const {
    return a_.data() + (4 * i + j) * ctx_->m;
  }
  const std::vector<uint64_t>& limbs() const { return a_; }

  bool operator==(const Mat4& o) const;
  bool operator!=(const Mat4& o) const { return !(*this == o); }
  // total order on limb vectors; used for canonical choices, not math
  bool operator<(const Mat4& o) const { return a_ < o.a_; }

  Mat4 operator*(const Mat4& o) const;
  Mat4 operator+(const Mat4& o) const;
  Mat4 operator-(const Mat4& o) const;
  Mat4 transpose() const;
  Mat4 scaled(const FieldElement& c) const;

  FieldElement trace() const;
  FieldElement det() const;
  Mat4 inverse() const;  // throws std::invalid_argument on singular input
  Mat4 pow(uint64_t e) const;
  bool is_identity() const;
  bool is_scalar() const;

  std::string str() const;

private:
  const FieldCtx* ctx_;
  std::vector<uint64_t> a_;  // 16 * m limbs, entry (i,j) at (4i+j)*m
};

using Vec4 = std::array<FieldElement, 4>;

Vec4 mat_vec(const Mat4& g, const Vec4& v);
Vec4 vec4_from_ints(const FieldCtx& ctx, const std::array<long, 4>& v);
bool vec4_is_zero(const Vec4& v);

// Rank of the span of the given vectors (Gaussian elimination).
int rank_of(const std::vector<Vec4>& vs);
// Basis of the right kernel {v : g v = 0}.
std::vector<Vec4> kernel_basis(const Mat4& g);
// True iff v lies in the span of basis.
bool in_span(const std::vector<Vec4>& basis, const Vec4& v);

// Entrywise application of a field embedding.
Mat4 map_entries(const Mat4& g, const Embedding& e);

// Coefficients of det(T I - g) = T^4 - chi3 T^3 + chi2 T^2 - chi1 T + chi0.
struct CharPoly4 {
  FieldElement chi0, chi1, chi2, chi3;
};

// chi3 = trace, chi2 = sum of principal 2x2 minors, chi1 = sum of principal
// 3x3 minors, chi0 = det.
CharPoly4 charpoly(const Mat4& g);
FieldElement chi2_of(const Mat4& g);

// Gram matrix of the symplectic form in the basis (e1, f1, e2, f2).
Mat4 gram_J(const FieldCtx& ctx);
bool is_symplectic(const Mat4& g);

// The explicit symplectic matrix with trace equal to the fixed multiplicative
// generator of ctx (the identity-trace analogue at q = 2 uses omega = 1):
// e1 -> omega e1 - f2, f1 -> -omega e1 + e2 + f2, e2 -> e1,
// f2 -> e1 + f1 - omega e2.
Mat4 trace_witness(const FieldCtx& ctx);

// Freely reduced word over {x1, x1^-1, x2, x2^-1}; letters +1,-1,+2,-2.
struct GroupWord {
  std::vector<int8_t> letters;

  // Freely reduces (cancels adjacent inverse pairs). Throws on letters
  // outside {+-1, +-2}.
  static GroupWord from_letters(const std::vector<int>& ls);
};

// Product of the letters in sequence order; empty word -> identity.
Mat4 eval_word(const GroupWord& w, const Mat4& g1, const Mat4& g2);

// Least k <= bound with g^k = I, or nullopt. With a group-order hint n
// (requires g^n = I), the order is found by dividing prime factors out of n
// instead of iterating. Throws std::invalid_argument on singular g or on a
// hint that g's order does not divide.
std::optional<uint64_t> element_order(
    const Mat4& g, uint64_t bound,
    std::optional<uint64_t> group_order_hint = std::nullopt);

// True iff the span of all words in g1, g2 is the full 16-dimensional matrix
// algebra (Burnside criterion).
bool is_absolutely_irreducible(const Mat4& g1, const Mat4& g2);

// |Sp_4(q)| = q^4 (q^2 - 1)(q^4 - 1). Throws std::overflow_error if the
// value exceeds uint64.
uint64_t sp4_order(uint64_t q);

// Fixed generating set: symplectic transvections t_{v,lambda} for v in eight
// fixed directions and lambda in {1, omega}, plus the two standard torus
// elements diag(omega, omega^-1, 1, 1) and diag(1, 1, omega, omega^-1);
// identity factors are dropped (q = 2 keeps only the lambda = 1
// transvections).
std::vector<Mat4> sp4_generators(const FieldCtx& ctx);

// Symplectic transvection x -> x + lambda (x, v) v.
Mat4 transvection(const FieldCtx& ctx, const Vec4& v, const FieldElement& lambda);

enum class OrderStrategy { Auto, Bfs, Chain };

// Order of <gens>. Bfs: exhaustive hash-set closure (packed 64-bit keys;
// requires 16 m ceil(log2 p) <= 64). Chain: stabilizer chain on the action
// on nonzero vectors, built twice with independent warm-start seeds and
// required to agree. Auto picks Bfs for q <= 4 and Chain otherwise.
// Throws ResourceError when the applicable cap is exceeded.
uint64_t group_order(const std::vector<Mat4>& gens,
                     OrderStrategy strategy = OrderStrategy::Auto);
uint64_t group_order(const Mat4& g1, const Mat4& g2,
                     OrderStrategy strategy = OrderStrategy::Auto);

// True iff g1^a = g2^b = (g1 g2)^c = I and <g1, g2> = Sp_4(q).
bool is_abc_pair(const Mat4& g1, const Mat4& g2, uint64_t a, uint64_t b,
                 uint64_t c);

// Representatives of the conjugacy classes of order-3 elements of Sp_4(q):
// diagonal / companion-block semisimple classes away from characteristic 3,
// the four unipotent classes (two transvection classes, two two-block
// classes) at characteristic 3.
std::vector<Mat4> order3_class_reps(const FieldCtx& ctx);

// Random conjugate of a random class representative (conjugator: product of
// random generators).
Mat4 random_order3(const FieldCtx& ctx, Rng& rng);

// Uniform-ish random element: product of random generators.
Mat4 random_element(const FieldCtx& ctx, Rng& rng);

struct CensusBudget {
  uint64_t max_samples = 4000;    // candidate pair draws
  uint64_t max_order_calls = 6;   // full group-order computations
};

struct CensusResult {
  bool found = false;
  std::optional<Mat4> g1, g2;
  uint64_t samples_used = 0;
  uint64_t order_calls = 0;
  bool budget_exhausted = false;  // not found and a budget cap was hit
};

// Randomized search for elements g1, g2 of Sp_4(q) with g1^a = g2^b =
// (g1 g2)^c = I generating the full group. "Not found" means the budget was
// exhausted, not a proof of absence. When central_product is set the product
// condition becomes (g1 g2)^c central (in {I, -I}), the condition relevant
// to projective (a, b, c)-generation.
CensusResult census_search(const FieldCtx& ctx, uint64_t a, uint64_t b,
                           uint64_t c, uint64_t seed,
                           const CensusBudget& budget = CensusBudget{},
                           bool central_product = false);

// True iff a witness was found that PSp_4(q) is an (a, b, c)-group, via the
// lift criterion: elements of odd orders a, b in Sp_4(q) with (g1 g2)^c
// central and <g1, g2> = Sp_4(q). Requires q odd and a, b odd (throws
// std::invalid_argument otherwise). Subject to the same search budget as
// census_search; false means "no witness found".
bool psp_quotient_test(uint64_t q, uint64_t a, uint64_t b, uint64_t c,
                       uint64_t seed,
                       const CensusBudget& budget = CensusBudget{});

// Deterministic field context for Sp_4(q) work: prime field for prime q,
// otherwise make_ext with a fixed seed.
FieldCtx make_sp4_field(uint64_t q);

}  // namespace trigen
