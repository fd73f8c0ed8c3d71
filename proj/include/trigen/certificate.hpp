#pragma once

// Finiteness certificates for (3,3,c)-generation of Sp_4(p^r).
//
// For a symplectic pair (g1, g2) over F_{p^r}-bar with g1^3 = g2^3 =
// (g1 g2)^c = I, the character-field generators x = tr(g1 g2),
// y = chi2(g1 g2), z = tr(g1 g2^-1) satisfy Theta_c(x) = Delta_c(y) =
// rho(x, y, z) = 0, and when the pair is absolutely irreducible the trace
// field F_p(x, y, z) is the field of definition. Enumerating all points of
// the variety V(Theta_c(X), Delta_c(Y), rho(X, Y, Z)) over extensions of F_p
// therefore bounds the degrees r for which Sp_4(p^r) can possibly be
// (3,3,c)-generated: the certificate lists every point together with the
// degree of the subfield its coordinates generate, and no r outside the
// listed degrees is achievable. The converse is not claimed; listed degrees
// are candidates, not witnesses.

#include <cstdint>
#include <memory>
#include <vector>

#include "trigen/gf.hpp"

namespace trigen {

// One point of the variety. The three coordinates live in a common field
// F_{p^n}; r is the degree over F_p of the subfield they generate (the lcm
// of the three element degrees), so r <= n.
struct CertPoint {
  FieldElement x, y, z;
  long r = 1;
};

struct Certificate {
  long p = 2;
  long c = 1;
  std::vector<CertPoint> points;       // canonically sorted
  std::vector<long> candidate_rs;      // sorted distinct point degrees
  long max_r = 0;                      // 0 when points is empty
  // Owners of the field contexts the points' coordinates reference; copies
  // of the certificate share them.
  std::vector<std::shared_ptr<const FieldCtx>> fields;
};

inline constexpr long kCertConductorCap = 60;
inline constexpr long kCertDegreeCap = 48;

// Enumerates all points of V(Theta_c(X), Delta_c(Y), rho(X, Y, Z)) over
// extensions of F_p: factors Theta_c and Delta_c mod p, pairs the roots of
// each factor-degree pair (dX, dY) inside one compositum of degree
// lcm(dX, dY), and factors the cubic rho(x, y, Z) over the compositum to
// locate the z coordinates, extending by the factor degree where needed.
// Every point is re-evaluated against the three defining equations before
// the certificate is returned. The seed steers the factorization and the
// modulus choices; the candidate degree set does not depend on it.
// Throws std::invalid_argument on composite p or c < 1, ResourceError when
// c exceeds conductor_cap or an intermediate field degree (compositum or
// cubic extension) would exceed degree_cap.
Certificate build_certificate(long p, long c, uint64_t seed,
                              long degree_cap = kCertDegreeCap,
                              long conductor_cap = kCertConductorCap);

// Largest candidate degree: for every r > certified_bound(cert), Sp_4(p^r)
// is not (3,3,c)-generated. 0 for an empty certificate. The bound is not
// monotone in c (the p = 2 certificates for c = 5 and c = 6 give 2 and 1).
long certified_bound(const Certificate& cert);

// Bound for PSp_4(p^r): a projective (3,3,c)-pair lifts to an Sp_4(p^r)
// (3,3,2c)-pair, so this returns certified_bound(build_certificate(p, 2c)).
// Requires an odd prime: at p = 2 the center is trivial and PSp_4(2^r) is
// Sp_4(2^r) itself, so the plain certificate already applies; such calls
// throw std::invalid_argument.
long psp_bound(long p, long c, uint64_t seed,
               long degree_cap = kCertDegreeCap,
               long conductor_cap = kCertConductorCap);

}  // namespace trigen
