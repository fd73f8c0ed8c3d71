#pragma once

// Univariate polynomials over a FieldCtx, with Cantor-Zassenhaus factorization
// (squarefree decomposition, distinct-degree and equal-degree splitting) and
// root finding in extension fields.

#include <cstdint>
#include <vector>

#include "trigen/gf.hpp"
#include "trigen/intpoly.hpp"

namespace trigen {

class FieldPoly {
public:
  FieldPoly() = default;
  explicit FieldPoly(const FieldCtx& ctx) : ctx_(&ctx) {}
  FieldPoly(const FieldCtx& ctx, std::vector<FieldElement> coeffs);

  // Reduce an integer polynomial into F_p <= F_{p^m}.
  static FieldPoly from_intpoly(const FieldCtx& ctx, const IntPoly& f);
  static FieldPoly monomial(const FieldCtx& ctx, size_t n, const FieldElement& c);

  const FieldCtx& ctx() const { return *ctx_; }
  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) / static_cast<int>(ctx_->m) - 1; }
  FieldElement coeff(size_t i) const;
  FieldElement leading() const;
  bool is_monic() const;

  bool operator==(const FieldPoly& o) const;
  bool operator!=(const FieldPoly& o) const { return !(*this == o); }
  // total order for canonical sorting of factor lists
  static bool less(const FieldPoly& a, const FieldPoly& b);

  FieldPoly operator+(const FieldPoly& o) const;
  FieldPoly operator-(const FieldPoly& o) const;
  FieldPoly operator*(const FieldPoly& o) const;
  FieldPoly scaled(const FieldElement& s) const;
  FieldPoly make_monic() const;
  FieldPoly derivative() const;
  FieldElement eval(const FieldElement& x) const;

  static void divmod(const FieldPoly& a, const FieldPoly& b, FieldPoly& q, FieldPoly& r);
  FieldPoly mod(const FieldPoly& b) const;
  static FieldPoly gcd(const FieldPoly& a, const FieldPoly& b);  // monic or zero
  // a^e mod f by square and multiply
  static FieldPoly pow_mod(const FieldPoly& a, const mpz_class& e, const FieldPoly& f);

  std::string str(const std::string& var = "T") const;

  // raw access for hot paths
  const std::vector<uint64_t>& limbs() const { return c_; }

private:
  void trim();
  const FieldCtx* ctx_ = nullptr;
  std::vector<uint64_t> c_;  // strided by ctx->m, coefficient i at [i*m, (i+1)*m)
  friend FieldPoly poly_from_limbs(const FieldCtx& ctx, std::vector<uint64_t> limbs);
};

struct FieldFactor {
  FieldPoly f;
  uint32_t multiplicity;
};

// Monic irreducible factorization, canonically sorted; seeded Cantor-Zassenhaus.
// Throws std::invalid_argument on the zero polynomial.
std::vector<FieldFactor> factor(const FieldPoly& f, uint64_t seed);

bool is_irreducible(const FieldPoly& f);

// All roots of f (over ext, via emb from f's field) with multiplicity,
// canonically sorted. `emb` must map f.ctx() into ext.
std::vector<std::pair<FieldElement, uint32_t>> roots_in(const FieldPoly& f, const FieldCtx& ext,
                                                        const Embedding& emb, uint64_t seed);
// Roots of an integer polynomial in F_{p^m} for the given extension context.
std::vector<std::pair<FieldElement, uint32_t>> roots_in_ext(const IntPoly& f, const FieldCtx& ext,
                                                            uint64_t seed);

}  // namespace trigen
