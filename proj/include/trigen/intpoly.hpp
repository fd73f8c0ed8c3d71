#pragma once

// Dense univariate polynomials with arbitrary-precision integer coefficients,
// plus the exact rational-arithmetic helpers built on them: content/primitive
// part, gcd over Q (returned as a primitive integer polynomial), lcm over Q,
// exact division, and evaluation/reduction mod p.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace trigen {

class IntPoly {
public:
  IntPoly() = default;
  explicit IntPoly(std::vector<mpz_class> coeffs) : c_(std::move(coeffs)) { trim(); }
  IntPoly(std::initializer_list<long> coeffs) {
    for (long v : coeffs) c_.emplace_back(v);
    trim();
  }

  static IntPoly zero() { return IntPoly(); }
  static IntPoly constant(const mpz_class& v) { return IntPoly(std::vector<mpz_class>{v}); }
  // T^n
  static IntPoly monomial(size_t n, const mpz_class& coeff = 1);

  bool is_zero() const { return c_.empty(); }
  // degree of the zero polynomial is -1
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const mpz_class& coeff(size_t i) const;
  const std::vector<mpz_class>& coeffs() const { return c_; }
  const mpz_class& leading() const;
  bool is_monic() const { return !c_.empty() && leading() == 1; }

  bool operator==(const IntPoly& o) const { return c_ == o.c_; }
  bool operator!=(const IntPoly& o) const { return !(*this == o); }

  IntPoly operator+(const IntPoly& o) const;
  IntPoly operator-(const IntPoly& o) const;
  IntPoly operator*(const IntPoly& o) const;
  IntPoly operator-() const;
  IntPoly operator*(const mpz_class& s) const;

  // gcd of coefficients, positive; 0 for the zero polynomial
  mpz_class content() const;
  // this / content, sign normalized so the leading coefficient is positive
  IntPoly primitive_part() const;
  IntPoly derivative() const;

  mpz_class eval(const mpz_class& x) const;
  // coefficients reduced into [0, p)
  std::vector<uint64_t> coeffs_mod(uint64_t p) const;

  // quotient and remainder over Z; requires divisor monic
  static void divmod_monic(const IntPoly& a, const IntPoly& b, IntPoly& q, IntPoly& r);
  // exact division; throws if the division leaves a remainder
  static IntPoly div_exact(const IntPoly& a, const IntPoly& b);

  // human-readable form, e.g. "T^3 - 16*T"
  std::string str(const std::string& var = "T") const;

private:
  void trim();
  std::vector<mpz_class> c_;  // c_[i] multiplies T^i; invariant: no trailing zeros
};

// gcd over Q, returned as the primitive integer polynomial with positive leading
// coefficient generating the same ideal of Q[T]; gcd(0, 0) = 0.
IntPoly gcd_q(const IntPoly& a, const IntPoly& b);

// lcm over Q of a nonempty list of nonzero polynomials, primitive with positive
// leading coefficient. Throws std::invalid_argument on an empty list or any zero.
IntPoly lcm_q(const std::vector<IntPoly>& polys);

}  // namespace trigen
