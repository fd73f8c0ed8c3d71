#include "trigen/certificate.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>

#include "trigen/cyclo.hpp"
#include "trigen/errors.hpp"
#include "trigen/fieldpoly.hpp"
#include "trigen/traceid.hpp"

namespace trigen {

namespace {

// Distinct irreducible-factor degrees, ascending.
std::vector<uint32_t> factor_degrees(const FieldPoly& f, uint64_t seed) {
  std::set<uint32_t> degs;
  for (const FieldFactor& ff : factor(f, seed)) degs.insert(static_cast<uint32_t>(ff.f.degree()));
  return {degs.begin(), degs.end()};
}

// The cubic rho(x, y, Z) = (Z + x + 1)(Z^2 + (2x - 10)Z + x^2 - 9y + 8x + 7)
// over the field of x and y, built by polynomial multiplication; roots are
// cross-checked against the closed-form rho evaluation afterwards.
FieldPoly rho_cubic(const FieldCtx& k, const FieldElement& x, const FieldElement& y) {
  FieldElement lin0 = x + k.one();
  FieldElement quad1 = k.from_int(2) * x + k.from_int(-10);
  FieldElement quad0 = x * x + k.from_int(-9) * y + k.from_int(8) * x + k.from_int(7);
  FieldPoly lin(k, {lin0, k.one()});
  FieldPoly quad(k, {quad0, quad1, k.one()});
  return lin * quad;
}

struct PointKey {
  uint32_t m;
  std::vector<uint64_t> x, y, z;
  bool operator<(const PointKey& o) const {
    return std::tie(m, x, y, z) < std::tie(o.m, o.x, o.y, o.z);
  }
};

}  // namespace

Certificate build_certificate(long p, long c, uint64_t seed, long degree_cap,
                              long conductor_cap) {
  if (c < 1) throw std::invalid_argument("build_certificate: c must be >= 1");
  if (degree_cap < 1 || conductor_cap < 1)
    throw std::invalid_argument("build_certificate: caps must be positive");
  if (c > conductor_cap)
    throw ResourceError("build_certificate: conductor " + std::to_string(c) +
                        " exceeds cap " + std::to_string(conductor_cap));
  if (p < 2 || !is_prime_u64(static_cast<uint64_t>(p)))
    throw std::invalid_argument("build_certificate: p = " + std::to_string(p) +
                                " is not prime");

  IntPoly th = theta(c);
  IntPoly de = delta(c);

  Certificate cert;
  cert.p = p;
  cert.c = c;

  // One context per extension degree, seeded deterministically; degree 1 is
  // the prime field.
  std::map<uint32_t, std::shared_ptr<const FieldCtx>> field_by_deg;
  auto get_field = [&](uint32_t n) -> const FieldCtx& {
    if (static_cast<long>(n) > degree_cap)
      throw ResourceError("build_certificate: intermediate degree " + std::to_string(n) +
                          " exceeds cap " + std::to_string(degree_cap) + " (p = " +
                          std::to_string(p) + ", c = " + std::to_string(c) + ")");
    auto it = field_by_deg.find(n);
    if (it == field_by_deg.end()) {
      auto ctx = std::make_shared<FieldCtx>(make_ext(static_cast<uint64_t>(p), n, seed + n));
      it = field_by_deg.emplace(n, std::move(ctx)).first;
    }
    return *it->second;
  };

  const FieldCtx& base = get_field(1);
  std::vector<uint32_t> dxs = factor_degrees(FieldPoly::from_intpoly(base, th), seed);
  std::vector<uint32_t> dys = factor_degrees(FieldPoly::from_intpoly(base, de), seed);

  // Roots of Theta_c and Delta_c in the compositum of each degree pair,
  // computed once per compositum degree.
  std::map<uint32_t, std::vector<FieldElement>> th_roots, de_roots;
  auto roots_of = [&](const IntPoly& f, uint32_t n,
                      std::map<uint32_t, std::vector<FieldElement>>& cache)
      -> const std::vector<FieldElement>& {
    auto it = cache.find(n);
    if (it == cache.end()) {
      std::vector<FieldElement> rs;
      for (const auto& [root, mult] : roots_in_ext(f, get_field(n), seed)) rs.push_back(root);
      it = cache.emplace(n, std::move(rs)).first;
    }
    return it->second;
  };

  std::map<std::pair<uint32_t, uint32_t>, Embedding> emb_cache;
  auto get_emb = [&](const FieldCtx& src, const FieldCtx& dst) -> const Embedding& {
    auto key = std::make_pair(src.m, dst.m);
    auto it = emb_cache.find(key);
    if (it == emb_cache.end()) it = emb_cache.emplace(key, Embedding(src, dst)).first;
    return it->second;
  };

  std::set<PointKey> seen;
  auto record = [&](const FieldElement& x, const FieldElement& y, const FieldElement& z) {
    PointKey key{x.ctx().m, x.rep(), y.rep(), z.rep()};
    if (!seen.insert(std::move(key)).second) return;
    long r = static_cast<long>(generated_subfield_degree({x, y, z}));
    cert.points.push_back(CertPoint{x, y, z, r});
  };

  for (uint32_t dx : dxs) {
    for (uint32_t dy : dys) {
      uint32_t L = static_cast<uint32_t>(std::lcm(dx, dy));
      const FieldCtx& kl = get_field(L);
      for (const FieldElement& x : roots_of(th, L, th_roots)) {
        if (element_degree(x) != dx) continue;
        for (const FieldElement& y : roots_of(de, L, de_roots)) {
          if (element_degree(y) != dy) continue;
          FieldPoly cubic = rho_cubic(kl, x, y);
          for (const FieldFactor& ff : factor(cubic, seed)) {
            uint32_t dz = static_cast<uint32_t>(ff.f.degree());
            if (dz == 1) {
              record(x, y, -ff.f.coeff(0));
            } else {
              const FieldCtx& kz = get_field(L * dz);
              const Embedding& emb = get_emb(kl, kz);
              for (const auto& [z, mult] : roots_in(ff.f, kz, emb, seed))
                record(emb(x), emb(y), z);
            }
          }
        }
      }
    }
  }

  // Re-evaluate every point against the defining equations; the cubic route
  // above and the closed-form rho evaluation are independent.
  std::map<uint32_t, std::pair<FieldPoly, FieldPoly>> eq_by_deg;
  for (const CertPoint& pt : cert.points) {
    uint32_t n = pt.x.ctx().m;
    auto it = eq_by_deg.find(n);
    if (it == eq_by_deg.end()) {
      const FieldCtx& k = get_field(n);
      it = eq_by_deg.emplace(n, std::make_pair(FieldPoly::from_intpoly(k, th),
                                               FieldPoly::from_intpoly(k, de))).first;
    }
    bool ok = it->second.first.eval(pt.x).is_zero() && it->second.second.eval(pt.y).is_zero() &&
              rho_eval(pt.x, pt.y, pt.z).is_zero() &&
              pt.r == static_cast<long>(generated_subfield_degree({pt.x, pt.y, pt.z}));
    if (!ok) throw std::logic_error("build_certificate: point fails re-evaluation");
  }

  std::sort(cert.points.begin(), cert.points.end(),
            [](const CertPoint& a, const CertPoint& b) {
              return std::tie(a.r, a.x.ctx().m, a.x.rep(), a.y.rep(), a.z.rep()) <
                     std::tie(b.r, b.x.ctx().m, b.x.rep(), b.y.rep(), b.z.rep());
            });

  std::set<long> rs;
  for (const CertPoint& pt : cert.points) rs.insert(pt.r);
  cert.candidate_rs.assign(rs.begin(), rs.end());
  cert.max_r = cert.candidate_rs.empty() ? 0 : cert.candidate_rs.back();
  for (auto& [deg, ctx] : field_by_deg) cert.fields.push_back(std::move(ctx));
  return cert;
}

long certified_bound(const Certificate& cert) { return cert.max_r; }

long psp_bound(long p, long c, uint64_t seed, long degree_cap, long conductor_cap) {
  if (p == 2)
    throw std::invalid_argument(
        "psp_bound: p = 2 has trivial center, PSp_4(2^r) and Sp_4(2^r) coincide; "
        "use the plain certificate");
  if (c < 1) throw std::invalid_argument("psp_bound: c must be >= 1");
  return certified_bound(build_certificate(p, 2 * c, seed, degree_cap, conductor_cap));
}

}  // namespace trigen
