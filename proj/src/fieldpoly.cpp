#include "trigen/fieldpoly.hpp"

#include <algorithm>
#include <sstream>

namespace trigen {

namespace {
constexpr uint32_t kMaxM = 64;
}

FieldPoly::FieldPoly(const FieldCtx& ctx, std::vector<FieldElement> coeffs) : ctx_(&ctx) {
  c_.resize(coeffs.size() * ctx.m, 0);
  for (size_t i = 0; i < coeffs.size(); ++i) {
    if (!coeffs[i].ctx().same_field(ctx)) throw std::invalid_argument("FieldPoly: mixed contexts");
    std::copy(coeffs[i].rep().begin(), coeffs[i].rep().end(), c_.begin() + i * ctx.m);
  }
  trim();
}

FieldPoly poly_from_limbs(const FieldCtx& ctx, std::vector<uint64_t> limbs) {
  FieldPoly f(ctx);
  f.c_ = std::move(limbs);
  f.trim();
  return f;
}

void FieldPoly::trim() {
  const uint32_t m = ctx_->m;
  while (!c_.empty() && fe_is_zero(*ctx_, c_.data() + c_.size() - m)) c_.resize(c_.size() - m);
}

FieldPoly FieldPoly::from_intpoly(const FieldCtx& ctx, const IntPoly& f) {
  auto res = f.coeffs_mod(ctx.p);
  std::vector<uint64_t> limbs(res.size() * ctx.m, 0);
  for (size_t i = 0; i < res.size(); ++i) limbs[i * ctx.m] = res[i];
  return poly_from_limbs(ctx, std::move(limbs));
}

FieldPoly FieldPoly::monomial(const FieldCtx& ctx, size_t n, const FieldElement& c) {
  std::vector<uint64_t> limbs((n + 1) * ctx.m, 0);
  std::copy(c.rep().begin(), c.rep().end(), limbs.begin() + n * ctx.m);
  return poly_from_limbs(ctx, std::move(limbs));
}

FieldElement FieldPoly::coeff(size_t i) const {
  const uint32_t m = ctx_->m;
  if (i * m >= c_.size()) return ctx_->zero();
  return FieldElement(ctx_, std::vector<uint64_t>(c_.begin() + i * m, c_.begin() + (i + 1) * m));
}

FieldElement FieldPoly::leading() const {
  if (is_zero()) throw std::logic_error("leading() of zero polynomial");
  return coeff(static_cast<size_t>(degree()));
}

bool FieldPoly::is_monic() const { return !is_zero() && leading() == ctx_->one(); }

bool FieldPoly::operator==(const FieldPoly& o) const {
  return ctx_->same_field(*o.ctx_) && c_ == o.c_;
}

bool FieldPoly::less(const FieldPoly& a, const FieldPoly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  return a.c_ < b.c_;
}

FieldPoly FieldPoly::operator+(const FieldPoly& o) const {
  const uint32_t m = ctx_->m;
  std::vector<uint64_t> v(std::max(c_.size(), o.c_.size()), 0);
  std::copy(c_.begin(), c_.end(), v.begin());
  for (size_t i = 0; i + m <= o.c_.size(); i += m)
    fe_add(*ctx_, v.data() + i, o.c_.data() + i, v.data() + i);
  return poly_from_limbs(*ctx_, std::move(v));
}

FieldPoly FieldPoly::operator-(const FieldPoly& o) const {
  const uint32_t m = ctx_->m;
  std::vector<uint64_t> v(std::max(c_.size(), o.c_.size()), 0);
  std::copy(c_.begin(), c_.end(), v.begin());
  for (size_t i = 0; i + m <= o.c_.size(); i += m)
    fe_sub(*ctx_, v.data() + i, o.c_.data() + i, v.data() + i);
  return poly_from_limbs(*ctx_, std::move(v));
}

FieldPoly FieldPoly::operator*(const FieldPoly& o) const {
  if (is_zero() || o.is_zero()) return FieldPoly(*ctx_);
  const uint32_t m = ctx_->m;
  size_t na = c_.size() / m, nb = o.c_.size() / m;
  std::vector<uint64_t> v((na + nb - 1) * m, 0);
  uint64_t tmp[kMaxM];
  for (size_t i = 0; i < na; ++i) {
    if (fe_is_zero(*ctx_, c_.data() + i * m)) continue;
    for (size_t j = 0; j < nb; ++j) {
      fe_mul(*ctx_, c_.data() + i * m, o.c_.data() + j * m, tmp);
      fe_add(*ctx_, v.data() + (i + j) * m, tmp, v.data() + (i + j) * m);
    }
  }
  return poly_from_limbs(*ctx_, std::move(v));
}

FieldPoly FieldPoly::scaled(const FieldElement& s) const {
  const uint32_t m = ctx_->m;
  std::vector<uint64_t> v(c_.size());
  for (size_t i = 0; i < c_.size(); i += m) fe_mul(*ctx_, c_.data() + i, s.data(), v.data() + i);
  return poly_from_limbs(*ctx_, std::move(v));
}

FieldPoly FieldPoly::make_monic() const {
  if (is_zero()) return *this;
  return scaled(leading().inv());
}

FieldPoly FieldPoly::derivative() const {
  const uint32_t m = ctx_->m;
  if (degree() < 1) return FieldPoly(*ctx_);
  size_t n = c_.size() / m;
  std::vector<uint64_t> v((n - 1) * m, 0);
  for (size_t i = 1; i < n; ++i) {
    FieldElement ci = coeff(i);
    FieldElement k = ctx_->from_mpz(mpz_class(static_cast<unsigned long>(i)));
    FieldElement d = ci * k;
    std::copy(d.rep().begin(), d.rep().end(), v.begin() + (i - 1) * m);
  }
  return poly_from_limbs(*ctx_, std::move(v));
}

FieldElement FieldPoly::eval(const FieldElement& x) const {
  FieldElement acc = ctx_->zero();
  const uint32_t m = ctx_->m;
  for (size_t i = c_.size(); i >= m; i -= m) {
    acc = acc * x + FieldElement(ctx_, std::vector<uint64_t>(c_.begin() + i - m, c_.begin() + i));
  }
  return acc;
}

void FieldPoly::divmod(const FieldPoly& a, const FieldPoly& b, FieldPoly& q, FieldPoly& r) {
  if (b.is_zero()) throw std::domain_error("FieldPoly::divmod: division by zero");
  const FieldCtx& k = *a.ctx_;
  const uint32_t m = k.m;
  int da = a.degree(), db = b.degree();
  if (da < db) {
    q = FieldPoly(k);
    r = a;
    return;
  }
  FieldElement binv = b.leading().inv();
  std::vector<uint64_t> rem(a.c_);
  std::vector<uint64_t> quo((da - db + 1) * m, 0);
  uint64_t c[kMaxM], tmp[kMaxM];
  for (int i = da; i >= db; --i) {
    const uint64_t* ri = rem.data() + static_cast<size_t>(i) * m;
    if (fe_is_zero(k, ri)) continue;
    fe_mul(k, ri, binv.data(), c);
    std::copy(c, c + m, quo.begin() + static_cast<size_t>(i - db) * m);
    for (int j = 0; j <= db; ++j) {
      fe_mul(k, c, b.c_.data() + static_cast<size_t>(j) * m, tmp);
      uint64_t* dst = rem.data() + static_cast<size_t>(i - db + j) * m;
      fe_sub(k, dst, tmp, dst);
    }
  }
  rem.resize(static_cast<size_t>(db) * m);
  q = poly_from_limbs(k, std::move(quo));
  r = poly_from_limbs(k, std::move(rem));
}

FieldPoly FieldPoly::mod(const FieldPoly& b) const {
  FieldPoly q, r;
  divmod(*this, b, q, r);
  return r;
}

FieldPoly FieldPoly::gcd(const FieldPoly& a, const FieldPoly& b) {
  FieldPoly x = a, y = b;
  while (!y.is_zero()) {
    FieldPoly r = x.mod(y);
    x = std::move(y);
    y = std::move(r);
  }
  return x.is_zero() ? x : x.make_monic();
}

FieldPoly FieldPoly::pow_mod(const FieldPoly& a, const mpz_class& e, const FieldPoly& f) {
  if (e < 0) throw std::invalid_argument("pow_mod: negative exponent");
  FieldPoly base = a.mod(f);
  FieldPoly res = FieldPoly(a.ctx(), {a.ctx().one()});
  size_t nbits = mpz_sizeinbase(e.get_mpz_t(), 2);
  if (e == 0) return res;
  for (size_t i = 0; i < nbits; ++i) {
    if (mpz_tstbit(e.get_mpz_t(), i)) res = (res * base).mod(f);
    if (i + 1 < nbits) base = (base * base).mod(f);
  }
  return res;
}

std::string FieldPoly::str(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    FieldElement a = coeff(static_cast<size_t>(i));
    if (a.is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    bool unit = a == ctx_->one();
    if (i == 0 || !unit) os << a.str();
    if (i > 0) {
      if (!unit) os << "*";
      os << var;
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

namespace {

FieldPoly poly_x(const FieldCtx& k) { return FieldPoly::monomial(k, 1, k.one()); }

// p-th root of a polynomial whose only terms are T^{ip}; valid over F_{p^m},
// where the p-th root of a coefficient is its p^(m-1) power.
FieldPoly pth_root(const FieldPoly& f) {
  const FieldCtx& k = f.ctx();
  uint64_t p = k.p;
  mpz_class e;
  mpz_ui_pow_ui(e.get_mpz_t(), static_cast<unsigned long>(p), k.m - 1);
  std::vector<FieldElement> out;
  for (int i = 0; i <= f.degree(); i += static_cast<int>(p)) {
    out.push_back(f.coeff(static_cast<size_t>(i)).pow(e));
  }
  // positions not divisible by p must vanish
  for (int i = 0; i <= f.degree(); ++i)
    if (i % static_cast<int>(p) != 0 && !f.coeff(static_cast<size_t>(i)).is_zero())
      throw std::logic_error("pth_root: polynomial is not a p-th power");
  return FieldPoly(k, std::move(out));
}

// monic squarefree decomposition: list of (factor, multiplicity)
void squarefree_decompose(const FieldPoly& f, uint32_t outer_mult,
                          std::vector<std::pair<FieldPoly, uint32_t>>& out) {
  const FieldCtx& k = f.ctx();
  if (f.degree() == 0) return;
  FieldPoly fp = f.derivative();
  if (fp.is_zero()) {
    squarefree_decompose(pth_root(f), outer_mult * static_cast<uint32_t>(k.p), out);
    return;
  }
  FieldPoly c = FieldPoly::gcd(f, fp);
  FieldPoly w = FieldPoly(k);
  {
    FieldPoly q, r;
    FieldPoly::divmod(f, c, q, r);
    w = q;
  }
  uint32_t i = 1;
  while (w.degree() > 0) {
    FieldPoly y = FieldPoly::gcd(w, c);
    FieldPoly z, r;
    FieldPoly::divmod(w, y, z, r);
    if (z.degree() > 0) out.emplace_back(z.make_monic(), outer_mult * i);
    FieldPoly cq;
    FieldPoly::divmod(c, y, cq, r);
    c = cq;
    w = y;
    ++i;
  }
  if (c.degree() > 0) squarefree_decompose(pth_root(c), outer_mult * static_cast<uint32_t>(k.p), out);
}

// distinct-degree factorization of a monic squarefree polynomial
std::vector<std::pair<FieldPoly, uint32_t>> ddf(const FieldPoly& f) {
  const FieldCtx& k = f.ctx();
  mpz_class q = k.order();
  std::vector<std::pair<FieldPoly, uint32_t>> out;
  FieldPoly rem = f;
  FieldPoly h = poly_x(k).mod(rem);
  uint32_t d = 0;
  while (rem.degree() > 0 && rem.degree() >= 2 * static_cast<int>(d + 1)) {
    ++d;
    h = FieldPoly::pow_mod(h, q, rem);
    FieldPoly g = FieldPoly::gcd(h - poly_x(k), rem);
    if (g.degree() > 0) {
      out.emplace_back(g, d);
      FieldPoly quo, r;
      FieldPoly::divmod(rem, g, quo, r);
      rem = quo;
      h = h.mod(rem);
    }
  }
  if (rem.degree() > 0) out.emplace_back(rem, static_cast<uint32_t>(rem.degree()));
  return out;
}

// equal-degree splitting: f monic squarefree, all irreducible factors of degree d
void edf(const FieldPoly& f, uint32_t d, Rng& rng, std::vector<FieldPoly>& out) {
  const FieldCtx& k = f.ctx();
  if (f.degree() == static_cast<int>(d)) {
    out.push_back(f);
    return;
  }
  mpz_class q = k.order();
  FieldPoly g(k);
  while (true) {
    // random polynomial of degree < deg f
    std::vector<FieldElement> cs;
    for (int i = 0; i < f.degree(); ++i) {
      std::vector<uint64_t> rep(k.m);
      for (auto& x : rep) x = rng.below(k.p);
      cs.emplace_back(&k, std::move(rep));
    }
    FieldPoly r(k, std::move(cs));
    if (r.degree() < 1 && k.p == 2) continue;
    if (r.is_zero()) continue;
    if (k.p == 2) {
      // trace map sum_{i<d*m} r^(2^i) mod f
      FieldPoly s = r.mod(f), t = r.mod(f);
      uint64_t steps = static_cast<uint64_t>(d) * k.m;
      for (uint64_t i = 1; i < steps; ++i) {
        t = (t * t).mod(f);
        s = s + t;
      }
      g = FieldPoly::gcd(s, f);
    } else {
      mpz_class qd, e;
      mpz_pow_ui(qd.get_mpz_t(), q.get_mpz_t(), d);
      e = (qd - 1) / 2;
      FieldPoly s = FieldPoly::pow_mod(r, e, f);
      g = FieldPoly::gcd(s - FieldPoly(k, {k.one()}), f);
    }
    if (g.degree() > 0 && g.degree() < f.degree()) break;
  }
  FieldPoly quo, r;
  FieldPoly::divmod(f, g, quo, r);
  edf(g, d, rng, out);
  edf(quo, d, rng, out);
}

}  // namespace

std::vector<FieldFactor> factor(const FieldPoly& f, uint64_t seed) {
  if (f.is_zero()) throw std::invalid_argument("factor: zero polynomial");
  Rng rng(seed);
  std::vector<FieldFactor> out;
  if (f.degree() == 0) return out;
  FieldPoly g = f.make_monic();
  std::vector<std::pair<FieldPoly, uint32_t>> sqf;
  squarefree_decompose(g, 1, sqf);
  for (auto& [part, mult] : sqf) {
    for (auto& [dd, d] : ddf(part)) {
      std::vector<FieldPoly> irr;
      edf(dd, d, rng, irr);
      for (auto& h : irr) out.push_back(FieldFactor{h, mult});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const FieldFactor& a, const FieldFactor& b) { return FieldPoly::less(a.f, b.f); });
  return out;
}

bool is_irreducible(const FieldPoly& f) {
  if (f.degree() < 1) return false;
  const FieldCtx& k = f.ctx();
  FieldPoly g = f.make_monic();
  uint32_t n = static_cast<uint32_t>(g.degree());
  if (n == 1) return true;
  mpz_class q = k.order();
  FieldPoly x = poly_x(k);
  // x^(q^n) == x mod g
  FieldPoly h = x.mod(g);
  for (uint32_t i = 0; i < n; ++i) h = FieldPoly::pow_mod(h, q, g);
  if (!(h == x.mod(g))) return false;
  // gcd(x^(q^(n/l)) - x, g) == 1 for every prime l | n
  uint32_t tmp = n;
  std::vector<uint32_t> primes;
  for (uint32_t d = 2; d * d <= tmp; ++d)
    if (tmp % d == 0) {
      primes.push_back(d);
      while (tmp % d == 0) tmp /= d;
    }
  if (tmp > 1) primes.push_back(tmp);
  for (uint32_t l : primes) {
    FieldPoly hh = x.mod(g);
    for (uint32_t i = 0; i < n / l; ++i) hh = FieldPoly::pow_mod(hh, q, g);
    if (FieldPoly::gcd(hh - x, g).degree() != 0) return false;
  }
  return true;
}

std::vector<std::pair<FieldElement, uint32_t>> roots_in(const FieldPoly& f, const FieldCtx& ext,
                                                        const Embedding& emb, uint64_t seed) {
  if (f.is_zero()) throw std::invalid_argument("roots_in: zero polynomial");
  std::vector<FieldElement> cs;
  for (int i = 0; i <= f.degree(); ++i) cs.push_back(emb(f.coeff(static_cast<size_t>(i))));
  FieldPoly g(ext, std::move(cs));
  std::vector<std::pair<FieldElement, uint32_t>> out;
  for (auto& fac : factor(g, seed)) {
    if (fac.f.degree() == 1) {
      // T + c -> root -c
      out.emplace_back(-fac.f.coeff(0), fac.multiplicity);
    }
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first.rep() < b.first.rep(); });
  return out;
}

std::vector<std::pair<FieldElement, uint32_t>> roots_in_ext(const IntPoly& f, const FieldCtx& ext,
                                                            uint64_t seed) {
  FieldPoly g = FieldPoly::from_intpoly(ext, f);
  if (g.is_zero())
    throw std::invalid_argument("roots_in_ext: polynomial vanishes mod p");
  std::vector<std::pair<FieldElement, uint32_t>> out;
  for (auto& fac : factor(g, seed)) {
    if (fac.f.degree() == 1) out.emplace_back(-fac.f.coeff(0), fac.multiplicity);
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first.rep() < b.first.rep(); });
  return out;
}

}  // namespace trigen
