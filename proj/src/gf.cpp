#include "trigen/gf.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "trigen/fieldpoly.hpp"

namespace trigen {

uint64_t Rng::below(uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::below(0)");
  uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return x % n;
}

namespace {

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t n) {
  return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % n);
}

uint64_t powmod_u64(uint64_t a, uint64_t e, uint64_t n) {
  uint64_t r = 1 % n;
  a %= n;
  while (e) {
    if (e & 1) r = mulmod_u64(r, a, n);
    a = mulmod_u64(a, a, n);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % q == 0) return n == q;
  }
  uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // deterministic Miller-Rabin base set for the 64-bit range
  for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

mpz_class FieldCtx::order() const {
  mpz_class q;
  mpz_ui_pow_ui(q.get_mpz_t(), static_cast<unsigned long>(p), m);
  return q;
}

// ---- span ops ----

void fe_set_zero(const FieldCtx& k, uint64_t* out) { std::fill(out, out + k.m, 0); }

void fe_add(const FieldCtx& k, const uint64_t* a, const uint64_t* b, uint64_t* out) {
  for (uint32_t i = 0; i < k.m; ++i) {
    uint64_t s = a[i] + b[i];
    out[i] = s >= k.p ? s - k.p : s;
  }
}

void fe_sub(const FieldCtx& k, const uint64_t* a, const uint64_t* b, uint64_t* out) {
  for (uint32_t i = 0; i < k.m; ++i) {
    uint64_t s = a[i] + k.p - b[i];
    out[i] = s >= k.p ? s - k.p : s;
  }
}

void fe_neg(const FieldCtx& k, const uint64_t* a, uint64_t* out) {
  for (uint32_t i = 0; i < k.m; ++i) out[i] = a[i] == 0 ? 0 : k.p - a[i];
}

void fe_mul(const FieldCtx& k, const uint64_t* a, const uint64_t* b, uint64_t* out) {
  if (k.m == 1) {
    out[0] = mulmod_u64(a[0], b[0], k.p);
    return;
  }
  const uint32_t m = k.m;
  __int128 acc[2 * 64 - 1] = {};
  for (uint32_t i = 0; i < m; ++i) {
    if (a[i] == 0) continue;
    for (uint32_t j = 0; j < m; ++j)
      acc[i + j] += static_cast<__int128>(a[i]) * b[j];
  }
  for (uint32_t i = 2 * m - 2; i >= m; --i) {
    int64_t r = static_cast<int64_t>(acc[i] % k.p);
    if (r < 0) r += k.p;
    if (r == 0) continue;
    for (uint32_t j = 0; j < m; ++j)
      acc[i - m + j] -= static_cast<__int128>(r) * k.modulus[j];
  }
  for (uint32_t i = 0; i < m; ++i) {
    int64_t r = static_cast<int64_t>(acc[i] % k.p);
    if (r < 0) r += k.p;
    out[i] = static_cast<uint64_t>(r);
  }
}

void fe_mul_add(const FieldCtx& k, const uint64_t* a, const uint64_t* b, uint64_t* out) {
  uint64_t tmp[64];
  fe_mul(k, a, b, tmp);
  fe_add(k, tmp, out, out);
}

bool fe_is_zero(const FieldCtx& k, const uint64_t* a) {
  for (uint32_t i = 0; i < k.m; ++i)
    if (a[i]) return false;
  return true;
}

bool fe_eq(const FieldCtx& k, const uint64_t* a, const uint64_t* b) {
  return std::equal(a, a + k.m, b);
}

void fe_pow(const FieldCtx& k, const uint64_t* a, const mpz_class& e, uint64_t* out) {
  if (e < 0) throw std::invalid_argument("fe_pow: negative exponent");
  uint64_t base[64], res[64];
  std::copy(a, a + k.m, base);
  fe_set_zero(k, res);
  res[0] = 1 % k.p;
  size_t nbits = mpz_sizeinbase(e.get_mpz_t(), 2);
  if (e == 0) {
    std::copy(res, res + k.m, out);
    return;
  }
  for (size_t i = 0; i < nbits; ++i) {
    if (mpz_tstbit(e.get_mpz_t(), i)) fe_mul(k, res, base, res);
    if (i + 1 < nbits) fe_mul(k, base, base, base);
  }
  std::copy(res, res + k.m, out);
}

void fe_inv(const FieldCtx& k, const uint64_t* a, uint64_t* out) {
  if (fe_is_zero(k, a)) throw std::domain_error("fe_inv: zero element");
  fe_pow(k, a, k.order() - 2, out);
}

// ---- FieldCtx ----

FieldElement FieldCtx::zero() const { return FieldElement(this, std::vector<uint64_t>(m, 0)); }

FieldElement FieldCtx::one() const {
  std::vector<uint64_t> v(m, 0);
  v[0] = 1 % p;
  return FieldElement(this, std::move(v));
}

FieldElement FieldCtx::from_int(long v) const {
  long r = v % static_cast<long>(p);
  if (r < 0) r += p;
  std::vector<uint64_t> rep(m, 0);
  rep[0] = static_cast<uint64_t>(r);
  return FieldElement(this, std::move(rep));
}

FieldElement FieldCtx::from_mpz(const mpz_class& v) const {
  mpz_class pz(static_cast<unsigned long>(p)), r;
  mpz_mod(r.get_mpz_t(), v.get_mpz_t(), pz.get_mpz_t());
  std::vector<uint64_t> rep(m, 0);
  rep[0] = r.get_ui();
  return FieldElement(this, std::move(rep));
}

FieldElement FieldCtx::element(std::vector<uint64_t> rep) const {
  if (rep.size() != m) throw std::invalid_argument("element: wrong rep length");
  for (uint64_t x : rep)
    if (x >= p) throw std::invalid_argument("element: limb out of range");
  return FieldElement(this, std::move(rep));
}

FieldElement FieldCtx::random_element(Rng& rng) const {
  std::vector<uint64_t> rep(m);
  for (auto& x : rep) x = rng.below(p);
  return FieldElement(this, std::move(rep));
}

FieldElement FieldCtx::generator() const {
  mpz_class q = order();
  if (!q.fits_ulong_p()) throw std::invalid_argument("generator: field too large");
  uint64_t n = q.get_ui() - 1;  // group order
  std::vector<uint64_t> prime_factors;
  uint64_t tmp = n;
  for (uint64_t d = 2; d * d <= tmp; ++d) {
    if (tmp % d == 0) {
      prime_factors.push_back(d);
      while (tmp % d == 0) tmp /= d;
    }
  }
  if (tmp > 1) prime_factors.push_back(tmp);
  // scan elements in canonical counter order: 1, 2, ..., then higher limbs
  for (uint64_t counter = 1; counter < q.get_ui(); ++counter) {
    std::vector<uint64_t> rep(m, 0);
    uint64_t c = counter;
    for (uint32_t i = 0; i < m; ++i) {
      rep[i] = c % p;
      c /= p;
    }
    FieldElement x(this, rep);
    bool ok = true;
    for (uint64_t f : prime_factors) {
      if (x.pow(mpz_class(static_cast<unsigned long>(n / f))) == one()) {
        ok = false;
        break;
      }
    }
    if (ok) return x;
  }
  throw std::logic_error("generator: none found");
}

std::string FieldCtx::str() const {
  std::ostringstream os;
  os << "F_" << order().get_str();
  if (m > 1) {
    os << " = F_" << p << "[a]/(";
    bool first = true;
    for (int i = static_cast<int>(m); i >= 0; --i) {
      uint64_t c = i == static_cast<int>(m) ? 1 : modulus[i];
      if (c == 0) continue;
      if (!first) os << "+";
      first = false;
      if (i == 0 || c != 1) os << c;
      if (i > 0) {
        os << "a";
        if (i > 1) os << "^" << i;
      }
    }
    os << ")";
  }
  return os.str();
}

FieldCtx make_prime(uint64_t p) {
  if (p >= (1ull << 31) || !is_prime_u64(p))
    throw std::invalid_argument("make_prime: need a prime < 2^31");
  FieldCtx k;
  k.p = p;
  k.m = 1;
  return k;
}

FieldCtx make_ext(uint64_t p, uint32_t m, uint64_t seed) {
  if (p >= (1ull << 31) || !is_prime_u64(p))
    throw std::invalid_argument("make_ext: need a prime < 2^31");
  if (m == 0 || m > 64) throw std::invalid_argument("make_ext: need 1 <= m <= 64");
  if (m == 1) return make_prime(p);
  FieldCtx k;
  k.p = p;
  k.m = m;
  Rng rng(seed);
  while (true) {
    std::vector<uint64_t> mod(m + 1, 0);
    mod[m] = 1;
    for (uint32_t i = 0; i < m; ++i) mod[i] = rng.below(p);
    if (mod[0] == 0) continue;  // reducible: root at 0
    FieldCtx trial = k;
    trial.modulus = mod;
    // view the candidate as a polynomial over F_p and test irreducibility
    FieldCtx base = make_prime(p);
    std::vector<FieldElement> cs;
    cs.reserve(m + 1);
    for (uint32_t i = 0; i <= m; ++i) cs.push_back(base.from_int(static_cast<long>(mod[i])));
    FieldPoly f(base, std::move(cs));
    if (is_irreducible(f)) {
      k.modulus = std::move(mod);
      return k;
    }
  }
}

// ---- FieldElement ----

void FieldElement::check_compat(const FieldElement& o) const {
  if (ctx_ == o.ctx_) return;
  if (!ctx_ || !o.ctx_ || !ctx_->same_field(*o.ctx_))
    throw std::invalid_argument("FieldElement: mixed field contexts");
}

bool FieldElement::is_zero() const { return fe_is_zero(*ctx_, rep_.data()); }

bool FieldElement::operator==(const FieldElement& o) const {
  check_compat(o);
  return rep_ == o.rep_;
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
  check_compat(o);
  FieldElement r(ctx_, std::vector<uint64_t>(ctx_->m));
  fe_add(*ctx_, data(), o.data(), r.data());
  return r;
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
  check_compat(o);
  FieldElement r(ctx_, std::vector<uint64_t>(ctx_->m));
  fe_sub(*ctx_, data(), o.data(), r.data());
  return r;
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
  check_compat(o);
  FieldElement r(ctx_, std::vector<uint64_t>(ctx_->m));
  fe_mul(*ctx_, data(), o.data(), r.data());
  return r;
}

FieldElement FieldElement::operator-() const {
  FieldElement r(ctx_, std::vector<uint64_t>(ctx_->m));
  fe_neg(*ctx_, data(), r.data());
  return r;
}

FieldElement FieldElement::inv() const {
  FieldElement r(ctx_, std::vector<uint64_t>(ctx_->m));
  fe_inv(*ctx_, data(), r.data());
  return r;
}

FieldElement FieldElement::pow(const mpz_class& e) const {
  if (e < 0) return inv().pow(-e);
  FieldElement r(ctx_, std::vector<uint64_t>(ctx_->m));
  fe_pow(*ctx_, data(), e, r.data());
  return r;
}

FieldElement FieldElement::frobenius() const { return pow(mpz_class(static_cast<unsigned long>(ctx_->p))); }

std::string FieldElement::str() const {
  if (ctx_->m == 1) return std::to_string(rep_[0]);
  std::ostringstream os;
  os << "[";
  for (uint32_t i = 0; i < ctx_->m; ++i) {
    if (i) os << ",";
    os << rep_[i];
  }
  os << "]";
  return os.str();
}

uint32_t element_degree(const FieldElement& x) {
  const FieldCtx& k = x.ctx();
  FieldElement y = x;
  for (uint32_t s = 1; s <= k.m; ++s) {
    y = y.frobenius();
    if (y == x) return s;
  }
  throw std::logic_error("element_degree: Frobenius orbit did not close");
}

uint32_t generated_subfield_degree(const std::vector<FieldElement>& xs) {
  uint64_t l = 1;
  for (const auto& x : xs) {
    if (!x.ctx().same_field(xs.front().ctx()))
      throw std::invalid_argument("generated_subfield_degree: mixed contexts");
    l = std::lcm(l, static_cast<uint64_t>(element_degree(x)));
  }
  return static_cast<uint32_t>(l);
}

// ---- Embedding ----

Embedding::Embedding(const FieldCtx& src, const FieldCtx& dst) : src_(&src), dst_(&dst) {
  if (src.p != dst.p || dst.m % src.m != 0)
    throw std::invalid_argument("Embedding: source degree must divide target degree");
  if (src.m == 1) {
    alpha_pow_.push_back(dst.one().rep());
    return;
  }
  if (src.same_field(dst)) {
    // identity embedding
    std::vector<uint64_t> pw(dst.m, 0);
    pw[0] = 1;
    for (uint32_t i = 0; i < src.m; ++i) {
      alpha_pow_.push_back(pw);
      std::rotate(pw.rbegin(), pw.rbegin() + 1, pw.rend());  // multiply by a: shift
      // shifting is only valid below the modulus degree, which holds since i+1 <= m-1
    }
    alpha_pow_.resize(src.m);
    return;
  }
  // canonical root of the source modulus in dst
  std::vector<mpz_class> cs(src.m + 1);
  for (uint32_t i = 0; i <= src.m; ++i) cs[i] = static_cast<unsigned long>(src.modulus[i]);
  IntPoly f((std::vector<mpz_class>(cs)));
  auto rs = roots_in_ext(f, dst, /*seed=*/0x5eedULL);
  if (rs.empty()) throw std::logic_error("Embedding: source modulus has no root in target");
  std::vector<std::vector<uint64_t>> reps;
  for (auto& [r, mult] : rs) reps.push_back(r.rep());
  std::sort(reps.begin(), reps.end());
  FieldElement beta(dst_, reps.front());
  FieldElement acc = dst.one();
  for (uint32_t i = 0; i < src.m; ++i) {
    alpha_pow_.push_back(acc.rep());
    acc = acc * beta;
  }
}

FieldElement Embedding::operator()(const FieldElement& x) const {
  if (!x.ctx().same_field(*src_)) throw std::invalid_argument("Embedding: element not in source field");
  std::vector<uint64_t> out(dst_->m, 0);
  uint64_t tmp[64];
  for (uint32_t i = 0; i < src_->m; ++i) {
    uint64_t c = x.rep()[i];
    if (c == 0) continue;
    for (uint32_t j = 0; j < dst_->m; ++j) {
      tmp[j] = mulmod_u64(alpha_pow_[i][j], c, dst_->p);
    }
    fe_add(*dst_, out.data(), tmp, out.data());
  }
  return FieldElement(dst_, std::move(out));
}

FieldElement embed(const FieldElement& x, const FieldCtx& target) {
  Embedding e(x.ctx(), target);
  return e(x);
}

}  // namespace trigen
