#pragma once

// Exact arithmetic in Z[zeta_c] and the cyclotomic constraint polynomials
// Theta_c and Delta_c: Theta_c is the lcm over (i, j) of the minimal
// polynomials of zeta^i + zeta^-i + zeta^j + zeta^-j, Delta_c the analogue
// for zeta^{i+j} + zeta^{i-j} + zeta^{-i+j} + zeta^{-i-j} + 2; they
// annihilate chi_3(g) and chi_2(g) for every symplectic g with g^c = I.

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "trigen/intpoly.hpp"
#include "trigen/matsp.hpp"

namespace trigen {

// The n-th cyclotomic polynomial, by recursive exact division of T^n - 1 by
// Phi_d over the proper divisors d of n. Results are memoized.
IntPoly cyclotomic_poly(uint64_t n);

// Shared data for a conductor c: Phi_c and the reductions of zeta^j.
// Owned by callers; CycloElt keeps a raw pointer, so the context must
// outlive its elements.
struct CycloCtx {
  uint64_t c = 1;
  IntPoly phi;                  // cyclotomic_poly(c), degree phi(c)
  std::vector<IntPoly> zeta_pow;  // zeta^j mod Phi_c for j < c

  explicit CycloCtx(uint64_t c);
};

// Residue in Z[zeta_c] = Z[T]/Phi_c; rep has degree < phi(c).
class CycloElt {
public:
  CycloElt(const CycloCtx& ctx, IntPoly rep);

  static CycloElt zero(const CycloCtx& ctx);
  static CycloElt from_int(const CycloCtx& ctx, long v);
  // zeta^e with e reduced mod c (negative e allowed).
  static CycloElt zeta_power(const CycloCtx& ctx, long e);

  const CycloCtx& ctx() const { return *ctx_; }
  const IntPoly& rep() const { return rep_; }

  bool operator==(const CycloElt& o) const;
  bool operator!=(const CycloElt& o) const { return !(*this == o); }
  CycloElt operator+(const CycloElt& o) const;
  CycloElt operator-(const CycloElt& o) const;
  CycloElt operator*(const CycloElt& o) const;

  // Galois action zeta -> zeta^k; requires gcd(k, c) = 1.
  CycloElt galois(uint64_t k) const;
  bool is_rational() const;  // rep is constant
  mpz_class rational_value() const;  // throws std::logic_error if not rational
  std::complex<double> approx() const;  // zeta -> exp(2 pi i / c)

  std::string str() const;

private:
  const CycloCtx* ctx_;
  IntPoly rep_;
};

// Monic minimal polynomial of alpha over Q: the product of (T - s) over the
// distinct Galois conjugates s of alpha. Coefficients are verified to be
// rational integers, cross-checked coefficientwise against a complex
// floating-point shadow of the same product (tolerance 1e-6 relative), and
// the result is verified squarefree; violations throw std::logic_error.
IntPoly min_poly(const CycloElt& alpha);

inline constexpr uint64_t kCycloDefaultCap = 120;

// Theta_c / Delta_c. The (i, j) grid is collapsed to orbit representatives
// under (i,j) -> (+-i, +-j), (j,i) and the Galois maps (i,j) -> (ki, kj),
// all of which preserve the minimal polynomial of the generated value, so
// the lcm is unchanged. Throws ResourceError when c exceeds the cap.
IntPoly theta(uint64_t c, uint64_t cap = kCycloDefaultCap);
IntPoly delta(uint64_t c, uint64_t cap = kCycloDefaultCap);

// (Theta_c(chi_3(g)) = 0, Delta_c(chi_2(g)) = 0) over g's field, with the
// polynomials reduced mod p. Throws std::invalid_argument unless g^c = I.
// Theta_c and Delta_c are cached per conductor.
std::pair<bool, bool> annihilation_check(const Mat4& g, uint64_t c);

}  // namespace trigen
