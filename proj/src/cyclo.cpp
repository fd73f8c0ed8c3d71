#include "trigen/cyclo.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <utility>

#include "trigen/errors.hpp"

namespace trigen {

namespace {

std::mutex g_cyclo_mutex;

const double kPi = 3.14159265358979323846;

}  // namespace

IntPoly cyclotomic_poly(uint64_t n) {
  if (n == 0) throw std::invalid_argument("cyclotomic_poly: n must be >= 1");
  static std::map<uint64_t, IntPoly> cache;
  std::lock_guard<std::mutex> lock(g_cyclo_mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  // Phi_n = (T^n - 1) / prod_{d | n, d < n} Phi_d, computed without
  // re-locking by building the divisor chain bottom-up.
  std::function<IntPoly(uint64_t)> build = [&](uint64_t k) -> IntPoly {
    auto hit = cache.find(k);
    if (hit != cache.end()) return hit->second;
    std::vector<mpz_class> cs(k + 1, 0);
    cs[0] = -1;
    cs[k] = 1;
    IntPoly num{std::vector<mpz_class>(cs)};
    for (uint64_t d = 1; d < k; ++d) {
      if (k % d != 0) continue;
      num = IntPoly::div_exact(num, build(d));
    }
    cache.emplace(k, num);
    return num;
  };
  return build(n);
}

namespace {

IntPoly rem_monic(const IntPoly& a, const IntPoly& b) {
  IntPoly q, r;
  IntPoly::divmod_monic(a, b, q, r);
  return r;
}

}  // namespace

// ------------------------------------------------------------- CycloCtx

CycloCtx::CycloCtx(uint64_t c_) : c(c_), phi(cyclotomic_poly(c_)) {
  zeta_pow.reserve(c);
  IntPoly t = IntPoly::constant(1);
  const IntPoly x = IntPoly::monomial(1, 1);
  for (uint64_t j = 0; j < c; ++j) {
    zeta_pow.push_back(t);
    t = rem_monic(t * x, phi);
  }
}

// ------------------------------------------------------------- CycloElt

CycloElt::CycloElt(const CycloCtx& ctx, IntPoly rep) : ctx_(&ctx) {
  rep_ = rem_monic(rep, ctx.phi);
}

CycloElt CycloElt::zero(const CycloCtx& ctx) {
  return CycloElt(ctx, IntPoly::zero());
}

CycloElt CycloElt::from_int(const CycloCtx& ctx, long v) {
  return CycloElt(ctx, IntPoly::constant(v));
}

CycloElt CycloElt::zeta_power(const CycloCtx& ctx, long e) {
  long c = static_cast<long>(ctx.c);
  long r = ((e % c) + c) % c;
  return CycloElt(ctx, ctx.zeta_pow[static_cast<size_t>(r)]);
}

bool CycloElt::operator==(const CycloElt& o) const {
  if (ctx_->c != o.ctx_->c)
    throw std::invalid_argument("CycloElt: mixed conductors");
  return rep_ == o.rep_;
}

CycloElt CycloElt::operator+(const CycloElt& o) const {
  if (ctx_->c != o.ctx_->c)
    throw std::invalid_argument("CycloElt: mixed conductors");
  return CycloElt(*ctx_, rep_ + o.rep_);
}

CycloElt CycloElt::operator-(const CycloElt& o) const {
  if (ctx_->c != o.ctx_->c)
    throw std::invalid_argument("CycloElt: mixed conductors");
  return CycloElt(*ctx_, rep_ - o.rep_);
}

CycloElt CycloElt::operator*(const CycloElt& o) const {
  if (ctx_->c != o.ctx_->c)
    throw std::invalid_argument("CycloElt: mixed conductors");
  return CycloElt(*ctx_, rep_ * o.rep_);
}

CycloElt CycloElt::galois(uint64_t k) const {
  if (std::gcd(k, ctx_->c) != 1)
    throw std::invalid_argument("CycloElt::galois: k not a unit mod c");
  IntPoly out = IntPoly::zero();
  for (int i = 0; i <= rep_.degree(); ++i) {
    mpz_class ci = rep_.coeff(i);
    if (ci == 0) continue;
    out = out + ctx_->zeta_pow[(static_cast<uint64_t>(i) * k) % ctx_->c] * ci;
  }
  return CycloElt(*ctx_, std::move(out));
}

bool CycloElt::is_rational() const { return rep_.degree() <= 0; }

mpz_class CycloElt::rational_value() const {
  if (!is_rational())
    throw std::logic_error("CycloElt::rational_value: not rational");
  return rep_.degree() < 0 ? mpz_class(0) : rep_.coeff(0);
}

std::complex<double> CycloElt::approx() const {
  std::complex<double> acc(0.0, 0.0);
  for (int i = 0; i <= rep_.degree(); ++i) {
    double ci = rep_.coeff(i).get_d();
    if (ci == 0.0) continue;
    double ang = 2.0 * kPi * static_cast<double>(i) /
                 static_cast<double>(ctx_->c);
    acc += ci * std::complex<double>(std::cos(ang), std::sin(ang));
  }
  return acc;
}

std::string CycloElt::str() const {
  std::ostringstream os;
  os << rep_.str("z") << " (c=" << ctx_->c << ")";
  return os.str();
}

// ------------------------------------------------------------- min_poly

IntPoly min_poly(const CycloElt& alpha) {
  const CycloCtx& K = alpha.ctx();
  // Distinct Galois conjugates.
  std::vector<CycloElt> conj;
  for (uint64_t k = 0; k < K.c; ++k) {
    if (std::gcd(k, K.c) != 1) continue;
    CycloElt s = alpha.galois(k == 0 ? 1 : k);  // c = 1 has unit k = 0
    if (std::find(conj.begin(), conj.end(), s) == conj.end())
      conj.push_back(std::move(s));
  }
  if (K.c == 1 && conj.empty()) conj.push_back(alpha);

  // Exact product of (T - s), coefficients in Z[zeta]; complex shadow of
  // the same recurrence for the coefficientwise cross-check.
  std::vector<CycloElt> P{CycloElt::from_int(K, 1)};
  std::vector<std::complex<double>> Pf{{1.0, 0.0}};
  for (const CycloElt& s : conj) {
    std::vector<CycloElt> Q(P.size() + 1, CycloElt::zero(K));
    std::vector<std::complex<double>> Qf(P.size() + 1, {0.0, 0.0});
    std::complex<double> sf = s.approx();
    for (size_t i = 0; i < P.size(); ++i) {
      Q[i + 1] = Q[i + 1] + P[i];
      Q[i] = Q[i] - s * P[i];
      Qf[i + 1] += Pf[i];
      Qf[i] -= sf * Pf[i];
    }
    P = std::move(Q);
    Pf = std::move(Qf);
  }

  std::vector<mpz_class> coeffs;
  coeffs.reserve(P.size());
  for (size_t i = 0; i < P.size(); ++i) {
    if (!P[i].is_rational())
      throw std::logic_error("min_poly: non-rational coefficient");
    mpz_class v = P[i].rational_value();
    double exact = v.get_d();
    double err = std::abs(Pf[i].real() - exact) + std::abs(Pf[i].imag());
    if (err > 1e-6 * (1.0 + std::abs(exact)))
      throw std::logic_error("min_poly: floating shadow disagrees");
    coeffs.push_back(std::move(v));
  }
  IntPoly f{std::move(coeffs)};
  if (!f.is_monic() || f.degree() != static_cast<int>(conj.size()))
    throw std::logic_error("min_poly: degree or leading coefficient corrupt");
  if (f.degree() >= 1) {
    IntPoly g = gcd_q(f, f.derivative());
    if (g.degree() != 0) throw std::logic_error("min_poly: not squarefree");
  }
  return f;
}

// ---------------------------------------------------------- theta/delta

namespace {

// lcm over the (i, j) grid of the minimal polynomials of the values
// produced by `value(i, j)`. Values on the same orbit of (+-i, +-j), (j, i),
// (ki, kj) for units k are Galois conjugate, so one representative per orbit
// carries the whole lcm contribution.
template <typename ValueFn>
IntPoly grid_lcm(const CycloCtx& K, ValueFn value) {
  const uint64_t c = K.c;
  std::vector<uint64_t> units;
  for (uint64_t k = 0; k < c; ++k)
    if (std::gcd(k, c) == 1) units.push_back(k == 0 ? 1 : k);
  std::vector<char> seen(c * c, 0);
  std::vector<IntPoly> factors;
  for (uint64_t i = 0; i < c; ++i) {
    for (uint64_t j = 0; j < c; ++j) {
      if (seen[i * c + j]) continue;
      for (uint64_t k : units) {
        uint64_t a = (i * k) % c, b = (j * k) % c;
        uint64_t na = (c - a) % c, nb = (c - b) % c;
        const std::array<std::pair<uint64_t, uint64_t>, 8> orbit = {
            {{a, b}, {na, b}, {a, nb}, {na, nb}, {b, a}, {nb, a}, {b, na}, {nb, na}}};
        for (auto [s, t] : orbit) seen[s * c + t] = 1;
      }
      IntPoly f = min_poly(value(static_cast<long>(i), static_cast<long>(j)));
      if (std::find(factors.begin(), factors.end(), f) == factors.end())
        factors.push_back(std::move(f));
    }
  }
  IntPoly out = IntPoly::constant(1);
  for (const IntPoly& f : factors) out = out * f;
  return out;
}

void check_cap(uint64_t c, uint64_t cap, const char* who) {
  if (c == 0) throw std::invalid_argument(std::string(who) + ": c must be >= 1");
  if (c > cap)
    throw ResourceError(std::string(who) + ": conductor " + std::to_string(c) +
                        " exceeds cap " + std::to_string(cap));
}

}  // namespace

IntPoly theta(uint64_t c, uint64_t cap) {
  check_cap(c, cap, "theta");
  CycloCtx K(c);
  return grid_lcm(K, [&K](long i, long j) {
    return CycloElt::zeta_power(K, i) + CycloElt::zeta_power(K, -i) +
           CycloElt::zeta_power(K, j) + CycloElt::zeta_power(K, -j);
  });
}

IntPoly delta(uint64_t c, uint64_t cap) {
  check_cap(c, cap, "delta");
  CycloCtx K(c);
  return grid_lcm(K, [&K](long i, long j) {
    return CycloElt::zeta_power(K, i + j) + CycloElt::zeta_power(K, i - j) +
           CycloElt::zeta_power(K, -i + j) + CycloElt::zeta_power(K, -i - j) +
           CycloElt::from_int(K, 2);
  });
}

// --------------------------------------------------- annihilation_check

namespace {

FieldElement eval_mod_p(const IntPoly& f, const FieldElement& x) {
  const FieldCtx& k = x.ctx();
  std::vector<uint64_t> cs = f.coeffs_mod(k.p);
  FieldElement acc = k.zero();
  for (size_t i = cs.size(); i-- > 0;)
    acc = acc * x + k.from_int(static_cast<long>(cs[i]));
  return acc;
}

}  // namespace

std::pair<bool, bool> annihilation_check(const Mat4& g, uint64_t c) {
  if (c == 0)
    throw std::invalid_argument("annihilation_check: c must be >= 1");
  if (!g.pow(c).is_identity())
    throw std::invalid_argument("annihilation_check: g^c is not the identity");
  static std::map<uint64_t, std::pair<IntPoly, IntPoly>> cache;
  IntPoly th, de;
  {
    std::lock_guard<std::mutex> lock(g_cyclo_mutex);
    auto it = cache.find(c);
    if (it != cache.end()) {
      th = it->second.first;
      de = it->second.second;
    }
  }
  if (th.degree() < 0) {
    th = theta(c);
    de = delta(c);
    std::lock_guard<std::mutex> lock(g_cyclo_mutex);
    cache.emplace(c, std::make_pair(th, de));
  }
  CharPoly4 cp = charpoly(g);
  return {eval_mod_p(th, cp.chi3).is_zero(), eval_mod_p(de, cp.chi2).is_zero()};
}

}  // namespace trigen
