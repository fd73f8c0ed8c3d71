#pragma once

// Finite fields F_{p^m} with a small prime p and explicit modulus. A FieldCtx
// pins (p, m, modulus); elements are coefficient vectors of length m over F_p
// in the polynomial basis. Contexts are plain values owned by callers; elements
// keep a raw pointer to their context, which must outlive them.
//
// Low-level arithmetic works on raw limb spans so matrix code can avoid
// per-element allocation; FieldElement is the convenience wrapper.

#include <cstdint>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace trigen {

// Deterministic seeded RNG. Draws below a bound use rejection on the raw
// 64-bit stream, so sequences are identical across platforms.
class Rng {
public:
  explicit Rng(uint64_t seed) : eng_(seed) {}
  uint64_t next() { return eng_(); }
  uint64_t below(uint64_t n);

private:
  std::mt19937_64 eng_;
};

bool is_prime_u64(uint64_t n);

class FieldElement;

struct FieldCtx {
  uint64_t p = 0;
  uint32_t m = 1;
  // Monic irreducible modulus over F_p, coefficient i at modulus[i], size m+1.
  // Empty when m == 1.
  std::vector<uint64_t> modulus;

  bool same_field(const FieldCtx& o) const { return p == o.p && m == o.m && modulus == o.modulus; }
  mpz_class order() const;  // p^m

  FieldElement zero() const;
  FieldElement one() const;
  FieldElement from_int(long v) const;
  FieldElement from_mpz(const mpz_class& v) const;
  FieldElement element(std::vector<uint64_t> rep) const;  // validates limbs
  FieldElement random_element(Rng& rng) const;
  FieldElement generator() const;  // fixed multiplicative generator (deterministic scan)

  std::string str() const;  // e.g. "F_9 = F_3[a]/(a^2+2a+2)"
};

// Prime field F_p. Throws std::invalid_argument unless p is a prime < 2^31.
FieldCtx make_prime(uint64_t p);

// Extension field F_{p^m} with a seeded random search for a monic irreducible
// modulus. Deterministic for a fixed (p, m, seed). m = 1 gives the prime field.
FieldCtx make_ext(uint64_t p, uint32_t m, uint64_t seed);

// ---- raw span ops; all spans have length ctx.m unless noted ----
void fe_set_zero(const FieldCtx& k, uint64_t* out);
void fe_add(const FieldCtx& k, const uint64_t* a, const uint64_t* b, uint64_t* out);
void fe_sub(const FieldCtx& k, const uint64_t* a, const uint64_t* b, uint64_t* out);
void fe_neg(const FieldCtx& k, const uint64_t* a, uint64_t* out);
void fe_mul(const FieldCtx& k, const uint64_t* a, const uint64_t* b, uint64_t* out);
// out = a*b + out
void fe_mul_add(const FieldCtx& k, const uint64_t* a, const uint64_t* b, uint64_t* out);
bool fe_is_zero(const FieldCtx& k, const uint64_t* a);
bool fe_eq(const FieldCtx& k, const uint64_t* a, const uint64_t* b);
void fe_inv(const FieldCtx& k, const uint64_t* a, uint64_t* out);  // throws on zero
void fe_pow(const FieldCtx& k, const uint64_t* a, const mpz_class& e, uint64_t* out);

class FieldElement {
public:
  FieldElement() = default;
  FieldElement(const FieldCtx* ctx, std::vector<uint64_t> rep) : ctx_(ctx), rep_(std::move(rep)) {}

  const FieldCtx& ctx() const { return *ctx_; }
  const FieldCtx* ctx_ptr() const { return ctx_; }
  const std::vector<uint64_t>& rep() const { return rep_; }
  uint64_t* data() { return rep_.data(); }
  const uint64_t* data() const { return rep_.data(); }

  bool is_zero() const;
  bool operator==(const FieldElement& o) const;
  bool operator!=(const FieldElement& o) const { return !(*this == o); }
  // total order (by rep limbs); used for canonical choices, not math
  bool operator<(const FieldElement& o) const { return rep_ < o.rep_; }

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement operator-() const;
  FieldElement inv() const;
  FieldElement pow(const mpz_class& e) const;
  FieldElement frobenius() const;  // x^p

  std::string str() const;

private:
  void check_compat(const FieldElement& o) const;
  const FieldCtx* ctx_ = nullptr;
  std::vector<uint64_t> rep_;
};

// Least s >= 1 with x^(p^s) = x; always divides m.
uint32_t element_degree(const FieldElement& x);

// Degree over F_p of the subfield generated by all elements: lcm of their
// degrees; 1 for an empty list. Throws on mixed contexts.
uint32_t generated_subfield_degree(const std::vector<FieldElement>& xs);

// Field embedding F_{p^s} -> F_{p^t} for s | t, determined by a canonical root
// of the source modulus in the target (lexicographically least rep). Fixes the
// prime subfield pointwise.
class Embedding {
public:
  Embedding(const FieldCtx& src, const FieldCtx& dst);
  FieldElement operator()(const FieldElement& x) const;
  const FieldCtx& src() const { return *src_; }
  const FieldCtx& dst() const { return *dst_; }

private:
  const FieldCtx* src_;
  const FieldCtx* dst_;
  std::vector<std::vector<uint64_t>> alpha_pow_;  // images of alpha^i, i < src.m
};

// One-shot embedding of x into target (same p, source degree dividing target
// degree). Builds the canonical Embedding internally; throws
// std::invalid_argument when no embedding exists.
FieldElement embed(const FieldElement& x, const FieldCtx& target);

}  // namespace trigen
