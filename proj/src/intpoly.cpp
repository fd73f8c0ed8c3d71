#include "trigen/intpoly.hpp"

#include <sstream>

namespace trigen {

void IntPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

IntPoly IntPoly::monomial(size_t n, const mpz_class& coeff) {
  std::vector<mpz_class> v(n + 1, mpz_class(0));
  v[n] = coeff;
  return IntPoly(std::move(v));
}

const mpz_class& IntPoly::coeff(size_t i) const {
  static const mpz_class kZero(0);
  return i < c_.size() ? c_[i] : kZero;
}

const mpz_class& IntPoly::leading() const {
  if (c_.empty()) throw std::logic_error("leading() of zero polynomial");
  return c_.back();
}

IntPoly IntPoly::operator+(const IntPoly& o) const {
  std::vector<mpz_class> v(std::max(c_.size(), o.c_.size()), mpz_class(0));
  for (size_t i = 0; i < c_.size(); ++i) v[i] += c_[i];
  for (size_t i = 0; i < o.c_.size(); ++i) v[i] += o.c_[i];
  return IntPoly(std::move(v));
}

IntPoly IntPoly::operator-(const IntPoly& o) const {
  std::vector<mpz_class> v(std::max(c_.size(), o.c_.size()), mpz_class(0));
  for (size_t i = 0; i < c_.size(); ++i) v[i] += c_[i];
  for (size_t i = 0; i < o.c_.size(); ++i) v[i] -= o.c_[i];
  return IntPoly(std::move(v));
}

IntPoly IntPoly::operator-() const {
  std::vector<mpz_class> v(c_);
  for (auto& x : v) x = -x;
  return IntPoly(std::move(v));
}

IntPoly IntPoly::operator*(const IntPoly& o) const {
  if (is_zero() || o.is_zero()) return IntPoly();
  std::vector<mpz_class> v(c_.size() + o.c_.size() - 1, mpz_class(0));
  for (size_t i = 0; i < c_.size(); ++i)
    for (size_t j = 0; j < o.c_.size(); ++j) v[i + j] += c_[i] * o.c_[j];
  return IntPoly(std::move(v));
}

IntPoly IntPoly::operator*(const mpz_class& s) const {
  std::vector<mpz_class> v(c_);
  for (auto& x : v) x *= s;
  return IntPoly(std::move(v));
}

mpz_class IntPoly::content() const {
  mpz_class g = 0;
  for (const auto& x : c_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

IntPoly IntPoly::primitive_part() const {
  if (is_zero()) return IntPoly();
  mpz_class g = content();
  if (leading() < 0) g = -g;
  std::vector<mpz_class> v(c_);
  for (auto& x : v) x /= g;
  return IntPoly(std::move(v));
}

IntPoly IntPoly::derivative() const {
  if (c_.size() <= 1) return IntPoly();
  std::vector<mpz_class> v(c_.size() - 1);
  for (size_t i = 1; i < c_.size(); ++i) v[i - 1] = c_[i] * mpz_class(static_cast<unsigned long>(i));
  return IntPoly(std::move(v));
}

mpz_class IntPoly::eval(const mpz_class& x) const {
  mpz_class acc = 0;
  for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
  return acc;
}

std::vector<uint64_t> IntPoly::coeffs_mod(uint64_t p) const {
  std::vector<uint64_t> v(c_.size());
  mpz_class pz(static_cast<unsigned long>(p)), r;
  for (size_t i = 0; i < c_.size(); ++i) {
    mpz_mod(r.get_mpz_t(), c_[i].get_mpz_t(), pz.get_mpz_t());
    v[i] = r.get_ui();
  }
  while (!v.empty() && v.back() == 0) v.pop_back();
  return v;
}

void IntPoly::divmod_monic(const IntPoly& a, const IntPoly& b, IntPoly& q, IntPoly& r) {
  if (!b.is_monic()) throw std::invalid_argument("divmod_monic: divisor not monic");
  std::vector<mpz_class> rem(a.c_);
  int db = b.degree();
  std::vector<mpz_class> quo;
  if (a.degree() >= db) quo.assign(a.degree() - db + 1, mpz_class(0));
  for (int i = a.degree(); i >= db; --i) {
    mpz_class f = rem[i];
    if (f == 0) continue;
    quo[i - db] = f;
    for (int j = 0; j <= db; ++j) rem[i - db + j] -= f * b.c_[j];
  }
  q = IntPoly(std::move(quo));
  r = IntPoly(std::move(rem));
}

IntPoly IntPoly::div_exact(const IntPoly& a, const IntPoly& b) {
  if (b.is_zero()) throw std::invalid_argument("div_exact: division by zero");
  if (a.is_zero()) return IntPoly();
  // Long division over Q; every quotient coefficient must come out integral.
  std::vector<mpq_class> rem(a.c_.size());
  for (size_t i = 0; i < a.c_.size(); ++i) rem[i] = a.c_[i];
  int db = b.degree();
  if (a.degree() < db) throw std::invalid_argument("div_exact: not divisible (degree)");
  std::vector<mpq_class> quo(a.degree() - db + 1);
  mpq_class lb(b.leading());
  for (int i = a.degree(); i >= db; --i) {
    mpq_class f = rem[i] / lb;
    quo[i - db] = f;
    if (f == 0) continue;
    for (int j = 0; j <= db; ++j) rem[i - db + j] -= f * mpq_class(b.c_[j]);
  }
  for (const auto& x : rem)
    if (x != 0) throw std::invalid_argument("div_exact: not divisible (remainder)");
  std::vector<mpz_class> out(quo.size());
  for (size_t i = 0; i < quo.size(); ++i) {
    if (quo[i].get_den() != 1) throw std::invalid_argument("div_exact: non-integral quotient");
    out[i] = quo[i].get_num();
  }
  return IntPoly(std::move(out));
}

std::string IntPoly::str(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    const mpz_class& a = coeff(i);
    if (a == 0) continue;
    mpz_class mag = abs(a);
    if (first) {
      if (a < 0) os << "-";
      first = false;
    } else {
      os << (a < 0 ? " - " : " + ");
    }
    if (i == 0 || mag != 1) os << mag.get_str();
    if (i > 0) {
      if (mag != 1) os << "*";
      os << var;
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

namespace {

// One primitive-PRS step: primitive part of the pseudo-remainder prem(a, b).
IntPoly prem_primitive(const IntPoly& a, const IntPoly& b) {
  IntPoly r = a;
  int db = b.degree();
  const mpz_class& lb = b.leading();
  while (!r.is_zero() && r.degree() >= db) {
    int dr = r.degree();
    IntPoly shifted = b * IntPoly::monomial(static_cast<size_t>(dr - db), r.leading());
    r = r * lb - shifted;
    if (!r.is_zero() && r.degree() >= dr)
      throw std::logic_error("prem_primitive: degree did not drop");
  }
  return r.primitive_part();
}

}  // namespace

IntPoly gcd_q(const IntPoly& a, const IntPoly& b) {
  if (a.is_zero()) return b.primitive_part();
  if (b.is_zero()) return a.primitive_part();
  IntPoly x = a.primitive_part(), y = b.primitive_part();
  if (x.degree() < y.degree()) std::swap(x, y);
  while (!y.is_zero()) {
    IntPoly r = prem_primitive(x, y);
    x = std::move(y);
    y = std::move(r);
  }
  return x;
}

IntPoly lcm_q(const std::vector<IntPoly>& polys) {
  if (polys.empty()) throw std::invalid_argument("lcm_q: empty list");
  IntPoly acc = IntPoly::constant(1);
  for (const auto& f : polys) {
    if (f.is_zero()) throw std::invalid_argument("lcm_q: zero polynomial in list");
    IntPoly g = gcd_q(acc, f);
    acc = (IntPoly::div_exact(acc, g) * f.primitive_part()).primitive_part();
  }
  return acc;
}

}  // namespace trigen
