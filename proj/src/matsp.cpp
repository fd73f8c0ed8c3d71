#include "trigen/matsp.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cstring>
#include <sstream>

#include "trigen/errors.hpp"

namespace trigen {

namespace {

constexpr uint32_t kMaxM = 8;  // larger extension degrees never arise here

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// C = A * B on raw 16*m limb arrays; C must not alias A or B.
void mul_raw(const FieldCtx& k, const uint64_t* A, const uint64_t* B,
             uint64_t* C) {
  const uint32_t m = k.m;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      uint64_t* out = C + (4 * i + j) * m;
      fe_set_zero(k, out);
      for (int t = 0; t < 4; ++t) {
        fe_mul_add(k, A + (4 * i + t) * m, B + (4 * t + j) * m, out);
      }
    }
  }
}

FieldElement det3(const FieldElement& a, const FieldElement& b,
                  const FieldElement& c, const FieldElement& d,
                  const FieldElement& e, const FieldElement& f,
                  const FieldElement& g, const FieldElement& h,
                  const FieldElement& i) {
  return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
}

// 3x3 minor of g deleting row r and column c.
FieldElement minor3(const Mat4& g, int r, int c) {
  FieldElement v[9];
  int t = 0;
  for (int i = 0; i < 4; ++i) {
    if (i == r) continue;
    for (int j = 0; j < 4; ++j) {
      if (j == c) continue;
      v[t++] = g.at(i, j);
    }
  }
  return det3(v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8]);
}

uint64_t ctx_q(const FieldCtx& k) {
  uint64_t q = 1;
  for (uint32_t i = 0; i < k.m; ++i) {
    if (q > UINT64_MAX / k.p) throw std::overflow_error("field too large");
    q *= k.p;
  }
  return q;
}

Mat4 diag4(const FieldCtx& k, const FieldElement& a, const FieldElement& b,
           const FieldElement& c, const FieldElement& d) {
  Mat4 g(k);
  g.set(0, 0, a);
  g.set(1, 1, b);
  g.set(2, 2, c);
  g.set(3, 3, d);
  return g;
}

// Block-diagonal embedding of two 2x2 blocks into the (e1,f1) and (e2,f2)
// planes.
Mat4 blockdiag22(const FieldCtx& k, const std::array<long, 4>& top,
                 const std::array<long, 4>& bot) {
  Mat4 g(k);
  g.set(0, 0, k.from_int(top[0]));
  g.set(0, 1, k.from_int(top[1]));
  g.set(1, 0, k.from_int(top[2]));
  g.set(1, 1, k.from_int(top[3]));
  g.set(2, 2, k.from_int(bot[0]));
  g.set(2, 3, k.from_int(bot[1]));
  g.set(3, 2, k.from_int(bot[2]));
  g.set(3, 3, k.from_int(bot[3]));
  return g;
}

}  // namespace

// ---------------------------------------------------------------- Mat4

Mat4::Mat4(const FieldCtx& ctx) : ctx_(&ctx), a_(16 * ctx.m, 0) {}

Mat4 Mat4::identity(const FieldCtx& ctx) {
  Mat4 g(ctx);
  for (int i = 0; i < 4; ++i) g.entry(i, i)[0] = 1;
  return g;
}

Mat4 Mat4::from_rows(const FieldCtx& ctx,
                     const std::array<std::array<long, 4>, 4>& rows) {
  Mat4 g(ctx);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g.set(i, j, ctx.from_int(rows[i][j]));
  return g;
}

FieldElement Mat4::at(int i, int j) const {
  assert(0 <= i && i < 4 && 0 <= j && j < 4);
  const uint64_t* e = entry(i, j);
  return FieldElement(ctx_, std::vector<uint64_t>(e, e + ctx_->m));
}

void Mat4::set(int i, int j, const FieldElement& v) {
  assert(0 <= i && i < 4 && 0 <= j && j < 4);
  if (!v.ctx().same_field(*ctx_))
    throw std::invalid_argument("Mat4::set: element from a different field");
  std::memcpy(entry(i, j), v.data(), ctx_->m * sizeof(uint64_t));
}

bool Mat4::operator==(const Mat4& o) const {
  if (!ctx_->same_field(*o.ctx_))
    throw std::invalid_argument("Mat4: comparing across fields");
  return a_ == o.a_;
}

Mat4 Mat4::operator*(const Mat4& o) const {
  if (!ctx_->same_field(*o.ctx_))
    throw std::invalid_argument("Mat4: mixed-field product");
  Mat4 out(*ctx_);
  mul_raw(*ctx_, a_.data(), o.a_.data(), out.a_.data());
  return out;
}

Mat4 Mat4::operator+(const Mat4& o) const {
  if (!ctx_->same_field(*o.ctx_))
    throw std::invalid_argument("Mat4: mixed-field sum");
  Mat4 out(*ctx_);
  for (int t = 0; t < 16; ++t)
    fe_add(*ctx_, a_.data() + t * ctx_->m, o.a_.data() + t * ctx_->m,
           out.a_.data() + t * ctx_->m);
  return out;
}

Mat4 Mat4::operator-(const Mat4& o) const {
  if (!ctx_->same_field(*o.ctx_))
    throw std::invalid_argument("Mat4: mixed-field difference");
  Mat4 out(*ctx_);
  for (int t = 0; t < 16; ++t)
    fe_sub(*ctx_, a_.data() + t * ctx_->m, o.a_.data() + t * ctx_->m,
           out.a_.data() + t * ctx_->m);
  return out;
}

Mat4 Mat4::transpose() const {
  Mat4 out(*ctx_);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      std::memcpy(out.entry(j, i), entry(i, j), ctx_->m * sizeof(uint64_t));
  return out;
}

Mat4 Mat4::scaled(const FieldElement& c) const {
  Mat4 out(*ctx_);
  for (int t = 0; t < 16; ++t)
    fe_mul(*ctx_, a_.data() + t * ctx_->m, c.data(),
           out.a_.data() + t * ctx_->m);
  return out;
}

FieldElement Mat4::trace() const {
  FieldElement s = ctx_->zero();
  for (int i = 0; i < 4; ++i) s = s + at(i, i);
  return s;
}

FieldElement Mat4::det() const {
  FieldElement s = ctx_->zero();
  for (int j = 0; j < 4; ++j) {
    FieldElement term = at(0, j) * minor3(*this, 0, j);
    s = (j % 2 == 0) ? s + term : s - term;
  }
  return s;
}

Mat4 Mat4::inverse() const {
  FieldElement d = det();
  if (d.is_zero()) throw std::invalid_argument("Mat4::inverse: singular");
  FieldElement dinv = d.inv();
  Mat4 out(*ctx_);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      FieldElement cof = minor3(*this, i, j);
      if ((i + j) % 2 == 1) cof = -cof;
      out.set(j, i, cof * dinv);  // adjugate transposes the cofactors
    }
  }
  return out;
}

Mat4 Mat4::pow(uint64_t e) const {
  Mat4 acc = identity(*ctx_);
  Mat4 base = *this;
  while (e > 0) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

bool Mat4::is_identity() const {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const uint64_t* e = entry(i, j);
      if (i == j) {
        if (e[0] != 1) return false;
        for (uint32_t t = 1; t < ctx_->m; ++t)
          if (e[t] != 0) return false;
      } else {
        for (uint32_t t = 0; t < ctx_->m; ++t)
          if (e[t] != 0) return false;
      }
    }
  return true;
}

bool Mat4::is_scalar() const {
  const uint64_t* d0 = entry(0, 0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const uint64_t* e = entry(i, j);
      if (i == j) {
        if (!fe_eq(*ctx_, e, d0)) return false;
      } else if (!fe_is_zero(*ctx_, e)) {
        return false;
      }
    }
  return true;
}

std::string Mat4::str() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < 4; ++i) {
    os << (i ? ", [" : "[");
    for (int j = 0; j < 4; ++j) os << (j ? ", " : "") << at(i, j).str();
    os << "]";
  }
  os << "]";
  return os.str();
}

// ------------------------------------------------------------- vectors

Vec4 mat_vec(const Mat4& g, const Vec4& v) {
  const FieldCtx& k = g.ctx();
  Vec4 out{k.zero(), k.zero(), k.zero(), k.zero()};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[i] = out[i] + g.at(i, j) * v[j];
  return out;
}

Vec4 vec4_from_ints(const FieldCtx& ctx, const std::array<long, 4>& v) {
  return Vec4{ctx.from_int(v[0]), ctx.from_int(v[1]), ctx.from_int(v[2]),
              ctx.from_int(v[3])};
}

bool vec4_is_zero(const Vec4& v) {
  return v[0].is_zero() && v[1].is_zero() && v[2].is_zero() && v[3].is_zero();
}

namespace {

// In-place elimination basis over rows of 4 coordinates. Rows are kept
// normalized with leading 1 at their pivot column.
struct Elim4 {
  std::vector<Vec4> rows;
  std::vector<int> pivots;

  // Reduces v by the basis; returns true (and absorbs v) if independent.
  bool add(Vec4 v) {
    for (size_t r = 0; r < rows.size(); ++r) {
      const FieldElement c = v[pivots[r]];  // copy: the loop below writes v
      if (!c.is_zero()) {
        for (int j = 0; j < 4; ++j) v[j] = v[j] - c * rows[r][j];
      }
    }
    int p = -1;
    for (int j = 0; j < 4; ++j)
      if (!v[j].is_zero()) {
        p = j;
        break;
      }
    if (p < 0) return false;
    FieldElement inv = v[p].inv();
    for (int j = 0; j < 4; ++j) v[j] = v[j] * inv;
    rows.push_back(v);
    pivots.push_back(p);
    return true;
  }
};

}  // namespace

int rank_of(const std::vector<Vec4>& vs) {
  Elim4 e;
  for (const Vec4& v : vs) e.add(v);
  return static_cast<int>(e.rows.size());
}

bool in_span(const std::vector<Vec4>& basis, const Vec4& v) {
  Elim4 e;
  for (const Vec4& b : basis) e.add(b);
  size_t r = e.rows.size();
  Elim4 e2 = e;
  return !e2.add(v) && e.rows.size() == r;
}

std::vector<Vec4> kernel_basis(const Mat4& g) {
  const FieldCtx& k = g.ctx();
  // Row-reduce the 4x4 system g v = 0.
  std::array<Vec4, 4> rows;
  for (int i = 0; i < 4; ++i)
    rows[i] = Vec4{g.at(i, 0), g.at(i, 1), g.at(i, 2), g.at(i, 3)};
  std::vector<int> pivot_col;
  int r = 0;
  for (int c = 0; c < 4 && r < 4; ++c) {
    int sel = -1;
    for (int i = r; i < 4; ++i)
      if (!rows[i][c].is_zero()) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    std::swap(rows[r], rows[sel]);
    FieldElement inv = rows[r][c].inv();
    for (int j = 0; j < 4; ++j) rows[r][j] = rows[r][j] * inv;
    for (int i = 0; i < 4; ++i) {
      if (i == r) continue;
      FieldElement f = rows[i][c];
      if (f.is_zero()) continue;
      for (int j = 0; j < 4; ++j) rows[i][j] = rows[i][j] - f * rows[r][j];
    }
    pivot_col.push_back(c);
    ++r;
  }
  std::vector<Vec4> basis;
  for (int c = 0; c < 4; ++c) {
    if (std::find(pivot_col.begin(), pivot_col.end(), c) != pivot_col.end())
      continue;
    Vec4 v{k.zero(), k.zero(), k.zero(), k.zero()};
    v[c] = k.one();
    for (int i = 0; i < r; ++i) v[pivot_col[i]] = -rows[i][c];
    basis.push_back(v);
  }
  return basis;
}

Mat4 map_entries(const Mat4& g, const Embedding& e) {
  if (!g.ctx().same_field(e.src()))
    throw std::invalid_argument("map_entries: matrix not over source field");
  Mat4 out(e.dst());
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out.set(i, j, e(g.at(i, j)));
  return out;
}

// ----------------------------------------------------------- charpoly

CharPoly4 charpoly(const Mat4& g) {
  const FieldCtx& k = g.ctx();
  FieldElement chi3 = g.trace();
  FieldElement chi2 = k.zero();
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      chi2 = chi2 + (g.at(i, i) * g.at(j, j) - g.at(i, j) * g.at(j, i));
  FieldElement chi1 = k.zero();
  for (int t = 0; t < 4; ++t) chi1 = chi1 + minor3(g, t, t);
  return CharPoly4{g.det(), chi1, chi2, chi3};
}

FieldElement chi2_of(const Mat4& g) { return charpoly(g).chi2; }

// ----------------------------------------------------------- symplectic

Mat4 gram_J(const FieldCtx& ctx) {
  return Mat4::from_rows(
      ctx, {{{0, 1, 0, 0}, {-1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, -1, 0}}});
}

bool is_symplectic(const Mat4& g) {
  Mat4 J = gram_J(g.ctx());
  return g.transpose() * J * g == J;
}

Mat4 trace_witness(const FieldCtx& ctx) {
  FieldElement w = ctx.generator();
  Mat4 g(ctx);
  // Columns are the images of e1, f1, e2, f2.
  g.set(0, 0, w);
  g.set(3, 0, -ctx.one());
  g.set(0, 1, -w);
  g.set(2, 1, ctx.one());
  g.set(3, 1, ctx.one());
  g.set(0, 2, ctx.one());
  g.set(0, 3, ctx.one());
  g.set(1, 3, ctx.one());
  g.set(2, 3, -w);
  return g;
}

Mat4 transvection(const FieldCtx& ctx, const Vec4& v,
                  const FieldElement& lambda) {
  Mat4 J = gram_J(ctx);
  Vec4 u = mat_vec(J, v);  // u[j] = (e_j, v)
  Mat4 t = Mat4::identity(ctx);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      t.set(i, j, t.at(i, j) + lambda * u[j] * v[i]);
  return t;
}

// ----------------------------------------------------------- words

GroupWord GroupWord::from_letters(const std::vector<int>& ls) {
  GroupWord w;
  for (int l : ls) {
    if (l == 0 || l > 2 || l < -2)
      throw std::invalid_argument("GroupWord: letter outside {+-1, +-2}");
    if (!w.letters.empty() && w.letters.back() == -l)
      w.letters.pop_back();
    else
      w.letters.push_back(static_cast<int8_t>(l));
  }
  return w;
}

Mat4 eval_word(const GroupWord& w, const Mat4& g1, const Mat4& g2) {
  if (!g1.ctx().same_field(g2.ctx()))
    throw std::invalid_argument("eval_word: mixed fields");
  Mat4 acc = Mat4::identity(g1.ctx());
  std::optional<Mat4> inv1, inv2;
  for (int8_t l : w.letters) {
    switch (l) {
      case 1:
        acc = acc * g1;
        break;
      case 2:
        acc = acc * g2;
        break;
      case -1:
        if (!inv1) inv1 = g1.inverse();
        acc = acc * *inv1;
        break;
      case -2:
        if (!inv2) inv2 = g2.inverse();
        acc = acc * *inv2;
        break;
      default:
        throw std::logic_error("eval_word: corrupt word");
    }
  }
  return acc;
}

// ----------------------------------------------------------- orders

std::optional<uint64_t> element_order(const Mat4& g, uint64_t bound,
                                      std::optional<uint64_t> group_order_hint) {
  if (g.det().is_zero())
    throw std::invalid_argument("element_order: singular matrix");
  if (group_order_hint) {
    uint64_t n = *group_order_hint;
    if (n == 0 || !g.pow(n).is_identity())
      throw std::invalid_argument("element_order: order does not divide hint");
    // Strip each prime out of n while the power stays trivial.
    uint64_t e = n;
    uint64_t rem = n;
    for (uint64_t p = 2; p * p <= rem; ++p) {
      if (rem % p != 0) continue;
      while (rem % p == 0) rem /= p;
      while (e % p == 0 && g.pow(e / p).is_identity()) e /= p;
    }
    if (rem > 1) {
      while (e % rem == 0 && g.pow(e / rem).is_identity()) e /= rem;
    }
    return e <= bound ? std::optional<uint64_t>(e) : std::nullopt;
  }
  Mat4 h = g;
  for (uint64_t k = 1; k <= bound; ++k) {
    if (h.is_identity()) return k;
    h = h * g;
  }
  return std::nullopt;
}

// ----------------------------------------------- absolute irreducibility

namespace {

// Echelon basis over flattened 16-coordinate matrix vectors (raw limbs).
struct Elim16 {
  const FieldCtx* k;
  std::vector<std::vector<uint64_t>> rows;  // normalized, 16*m limbs
  std::vector<int> pivots;                  // entry index of leading 1

  explicit Elim16(const FieldCtx& ctx) : k(&ctx) {}

  bool add(std::vector<uint64_t> v) {
    const uint32_t m = k->m;
    uint64_t tmp[kMaxM];
    for (size_t r = 0; r < rows.size(); ++r) {
      uint64_t* c = v.data() + pivots[r] * m;
      if (fe_is_zero(*k, c)) continue;
      uint64_t coef[kMaxM];
      std::memcpy(coef, c, m * sizeof(uint64_t));
      for (int t = 0; t < 16; ++t) {
        fe_mul(*k, rows[r].data() + t * m, coef, tmp);
        fe_sub(*k, v.data() + t * m, tmp, v.data() + t * m);
      }
    }
    int p = -1;
    for (int t = 0; t < 16; ++t)
      if (!fe_is_zero(*k, v.data() + t * m)) {
        p = t;
        break;
      }
    if (p < 0) return false;
    uint64_t inv[kMaxM];
    fe_inv(*k, v.data() + p * m, inv);
    for (int t = 0; t < 16; ++t) {
      fe_mul(*k, v.data() + t * m, inv, tmp);
      std::memcpy(v.data() + t * m, tmp, m * sizeof(uint64_t));
    }
    rows.push_back(std::move(v));
    pivots.push_back(p);
    return true;
  }
};

}  // namespace

bool is_absolutely_irreducible(const Mat4& g1, const Mat4& g2) {
  if (!g1.ctx().same_field(g2.ctx()))
    throw std::invalid_argument("is_absolutely_irreducible: mixed fields");
  const FieldCtx& k = g1.ctx();
  // Burnside: the span of all words in g1, g2 is the whole of M_4 iff the
  // pair acts absolutely irreducibly. Words are reached from the identity by
  // right-multiplications (inverses are polynomials in the element, so they
  // add nothing to the algebra).
  Elim16 basis(k);
  std::vector<Mat4> queue;
  Mat4 id = Mat4::identity(k);
  basis.add(id.limbs());
  queue.push_back(id);
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    if (basis.rows.size() == 16) return true;
    Mat4 cur = queue[qi];
    for (const Mat4* s : {&g1, &g2}) {
      Mat4 nxt = cur * *s;
      if (basis.add(nxt.limbs())) queue.push_back(nxt);
    }
  }
  return basis.rows.size() == 16;
}

// ----------------------------------------------------------- Sp4 data

uint64_t sp4_order(uint64_t q) {
  if (q < 2) throw std::invalid_argument("sp4_order: q must be at least 2");
  unsigned __int128 o = 1;
  for (int i = 0; i < 4; ++i) o *= q;
  o *= (unsigned __int128)(q * q - 1);
  unsigned __int128 q4 = (unsigned __int128)q * q * q * q;
  o *= q4 - 1;
  if (o > UINT64_MAX) throw std::overflow_error("sp4_order: exceeds uint64");
  return static_cast<uint64_t>(o);
}

std::vector<Mat4> sp4_generators(const FieldCtx& ctx) {
  FieldElement w = ctx.generator();
  std::vector<FieldElement> lambdas{ctx.one()};
  if (w != ctx.one()) lambdas.push_back(w);
  static const std::array<std::array<long, 4>, 8> dirs = {{{1, 0, 0, 0},
                                                           {0, 1, 0, 0},
                                                           {0, 0, 1, 0},
                                                           {0, 0, 0, 1},
                                                           {1, 0, 1, 0},
                                                           {1, 0, 0, 1},
                                                           {0, 1, 1, 0},
                                                           {0, 1, 0, 1}}};
  std::vector<Mat4> gens;
  for (const auto& d : dirs)
    for (const FieldElement& l : lambdas)
      gens.push_back(transvection(ctx, vec4_from_ints(ctx, d), l));
  if (w != ctx.one()) {
    FieldElement wi = w.inv();
    gens.push_back(diag4(ctx, w, wi, ctx.one(), ctx.one()));
    gens.push_back(diag4(ctx, ctx.one(), ctx.one(), w, wi));
  }
  std::vector<Mat4> out;
  for (Mat4& g : gens)
    if (!g.is_identity()) out.push_back(std::move(g));
  return out;
}

FieldCtx make_sp4_field(uint64_t q) {
  if (q < 2) throw std::invalid_argument("make_sp4_field: q must be >= 2");
  uint64_t p = 0;
  for (uint64_t d = 2; d * d <= q; ++d)
    if (q % d == 0) {
      p = d;
      break;
    }
  if (p == 0) p = q;
  uint32_t m = 0;
  uint64_t t = q;
  while (t > 1) {
    if (t % p != 0)
      throw std::invalid_argument("make_sp4_field: q is not a prime power");
    t /= p;
    ++m;
  }
  if (m == 1) return make_prime(p);
  return make_ext(p, m, /*seed=*/0x712a5ULL);
}

// ----------------------------------------------------------- BFS closure

namespace {

struct PackSpec {
  uint32_t bits = 0;   // bits per limb
  uint32_t limbs = 0;  // 16 * m
  bool ok = false;
};

PackSpec make_pack(const FieldCtx& k) {
  PackSpec s;
  s.bits = std::bit_width(k.p - 1);
  s.limbs = 16 * k.m;
  s.ok = s.bits * s.limbs <= 64;
  return s;
}

uint64_t pack_mat(const PackSpec& s, const uint64_t* limbs) {
  uint64_t key = 0;
  uint32_t pos = 0;
  for (uint32_t t = 0; t < s.limbs; ++t, pos += s.bits) key |= limbs[t] << pos;
  return key;
}

void unpack_mat(const PackSpec& s, uint64_t key, uint64_t* limbs) {
  const uint64_t mask = (s.bits == 64) ? ~0ULL : ((1ULL << s.bits) - 1);
  for (uint32_t t = 0; t < s.limbs; ++t, key >>= s.bits) limbs[t] = key & mask;
}

constexpr uint64_t kBfsEmpty = ~0ULL;  // encodes a rank-1 matrix, never inserted
constexpr uint64_t kBfsCap = 10500000;

class PackedSet {
public:
  explicit PackedSet(uint32_t log2cap)
      : mask_((1ULL << log2cap) - 1), slots_(1ULL << log2cap, kBfsEmpty) {}

  bool insert(uint64_t key) {
    size_t i = splitmix64(key) & mask_;
    while (slots_[i] != kBfsEmpty) {
      if (slots_[i] == key) return false;
      i = (i + 1) & mask_;
    }
    slots_[i] = key;
    ++count_;
    return true;
  }

  uint64_t count() const { return count_; }
  bool overloaded() const { return count_ * 10 > (mask_ + 1) * 7; }
  const std::vector<uint64_t>& slots() const { return slots_; }

private:
  uint64_t mask_;
  uint64_t count_ = 0;
  std::vector<uint64_t> slots_;
};

uint64_t bfs_order(const std::vector<Mat4>& gens) {
  const FieldCtx& k = gens[0].ctx();
  PackSpec ps = make_pack(k);
  if (!ps.ok)
    throw std::invalid_argument("group_order(Bfs): field entries not packable");
  uint32_t log2cap = 16;
  std::vector<uint64_t> gen_limbs;
  for (const Mat4& g : gens)
    gen_limbs.insert(gen_limbs.end(), g.limbs().begin(), g.limbs().end());
  const uint32_t gl = 16 * k.m;

  while (true) {
    PackedSet set(log2cap);
    Mat4 id = Mat4::identity(k);
    uint64_t id_key = pack_mat(ps, id.limbs().data());
    set.insert(id_key);
    std::vector<uint64_t> frontier{id_key}, next;
    uint64_t cur[16 * kMaxM], prod[16 * kMaxM];
    bool regrow = false;
    while (!frontier.empty() && !regrow) {
      next.clear();
      for (uint64_t key : frontier) {
        unpack_mat(ps, key, cur);
        for (size_t gi = 0; gi < gens.size(); ++gi) {
          mul_raw(k, cur, gen_limbs.data() + gi * gl, prod);
          uint64_t pk = pack_mat(ps, prod);
          if (set.insert(pk)) {
            next.push_back(pk);
            if (set.count() > kBfsCap)
              throw ResourceError("group_order(Bfs): closure exceeds cap");
            if (set.overloaded()) {
              if (log2cap >= 24)
                throw ResourceError("group_order(Bfs): table exceeds cap");
              ++log2cap;
              regrow = true;
            }
          }
        }
        if (regrow) break;
      }
      frontier.swap(next);
    }
    if (!regrow) return set.count();
  }
}

// Enumerates the packed closure (used by tests via group_order only; the
// element list itself stays internal).

// ----------------------------------------------------- stabilizer chain

// Points are nonzero vectors of F_q^4 encoded in base p as an integer code;
// the code of v is sum over coordinate limbs of limb * p^position.
struct ChainLevel {
  uint32_t base = 0;
  std::vector<Mat4> gens, gen_invs;
  std::vector<uint32_t> orbit_pos;  // point code -> index + 1 (0 = absent)
  std::vector<uint32_t> orbit_pts;
  std::vector<Mat4> transversal, transversal_inv;
};

class Chain {
public:
  Chain(const FieldCtx& ctx, const std::vector<Mat4>& gens, uint64_t seed)
      : ctx_(&ctx) {
    // Base points are forced outside the span of earlier ones (fixing a set
    // of vectors fixes its span), so at most 4 levels ever exist.
    levels_.reserve(8);
    npoints_ = 1;
    for (uint32_t i = 0; i < 4 * ctx.m; ++i) {
      npoints_ *= ctx.p;
      if (npoints_ > 1000000)
        throw ResourceError("group_order(Chain): point space exceeds cap");
    }
    Rng rng(seed);
    // Warm start: random subproducts seed the deeper levels early, so the
    // verification pass below finds few residues.
    std::vector<Mat4> seeds;
    for (int i = 0; i < 12 && gens.size() > 1; ++i) {
      Mat4 h = Mat4::identity(ctx);
      uint64_t len = 6 + rng.below(10);
      for (uint64_t j = 0; j < len; ++j)
        h = h * gens[rng.below(gens.size())];
      seeds.push_back(h);
    }
    for (const Mat4& g : gens) sift_in(g, 0);
    for (const Mat4& h : seeds) sift_in(h, 0);
    // Ascending verification: Schreier generators of level i sift through
    // the chain below it; residues are always placed at deeper levels, so a
    // single ascending pass certifies the whole chain.
    for (size_t i = 0; i < levels_.size(); ++i) verify_level(i);
  }

  uint64_t order() const {
    unsigned __int128 o = 1;
    for (const ChainLevel& l : levels_) {
      o *= l.orbit_pts.size();
      if (o > UINT64_MAX)
        throw std::overflow_error("group_order(Chain): exceeds uint64");
    }
    return static_cast<uint64_t>(o);
  }

private:
  uint32_t act(const Mat4& g, uint32_t code) const {
    const FieldCtx& k = *ctx_;
    const uint32_t m = k.m;
    uint64_t v[4 * kMaxM], out[4 * kMaxM];
    uint64_t c = code;
    for (uint32_t t = 0; t < 4 * m; ++t) {
      v[t] = c % k.p;
      c /= k.p;
    }
    for (int i = 0; i < 4; ++i) {
      fe_set_zero(k, out + i * m);
      for (int j = 0; j < 4; ++j)
        fe_mul_add(k, g.entry(i, j), v + j * m, out + i * m);
    }
    uint64_t nc = 0;
    for (uint32_t t = 4 * m; t-- > 0;) nc = nc * k.p + out[t];
    return static_cast<uint32_t>(nc);
  }

  uint32_t first_moved(const Mat4& g) const {
    for (uint32_t c = 1; c < npoints_; ++c)
      if (act(g, c) != c) return c;
    throw std::logic_error("Chain: identity passed to first_moved");
  }

  void add_level(uint32_t base) {
    ChainLevel l;
    l.base = base;
    l.orbit_pos.assign(npoints_, 0);
    l.orbit_pos[base] = 1;
    l.orbit_pts.push_back(base);
    l.transversal.push_back(Mat4::identity(*ctx_));
    l.transversal_inv.push_back(Mat4::identity(*ctx_));
    levels_.push_back(std::move(l));
  }

  void extend_orbit(ChainLevel& l, const Mat4& g, const Mat4& ginv) {
    // Phase 1: the new generator applied to the existing orbit; phase 2:
    // full closure from the newly reached points.
    std::vector<uint32_t> queue;
    size_t old = l.orbit_pts.size();
    for (size_t i = 0; i < old; ++i)
      reach(l, g, ginv, static_cast<uint32_t>(i), queue);
    for (size_t qi = 0; qi < queue.size(); ++qi) {
      uint32_t idx = queue[qi];
      for (size_t k = 0; k < l.gens.size(); ++k)
        reach(l, l.gens[k], l.gen_invs[k], idx, queue);
    }
  }

  void reach(ChainLevel& l, const Mat4& g, const Mat4& ginv, uint32_t idx,
             std::vector<uint32_t>& queue) {
    uint32_t np = act(g, l.orbit_pts[idx]);
    if (l.orbit_pos[np] != 0) return;
    l.orbit_pos[np] = static_cast<uint32_t>(l.orbit_pts.size()) + 1;
    l.orbit_pts.push_back(np);
    l.transversal.push_back(g * l.transversal[idx]);
    l.transversal_inv.push_back(l.transversal_inv[idx] * ginv);
    queue.push_back(l.orbit_pos[np] - 1);
  }

  void sift_in(Mat4 h, size_t start) {
    for (size_t i = start;; ++i) {
      if (h.is_identity()) return;
      if (i == levels_.size()) add_level(first_moved(h));
      ChainLevel& l = levels_[i];
      uint32_t u = act(h, l.base);
      if (u == l.base) continue;
      if (l.orbit_pos[u] == 0) {
        Mat4 hinv = h.inverse();
        l.gens.push_back(h);
        l.gen_invs.push_back(hinv);
        extend_orbit(l, h, hinv);
        return;
      }
      h = l.transversal_inv[l.orbit_pos[u] - 1] * h;
    }
  }

  void verify_level(size_t i) {
    // Residues land strictly deeper, so level i's ranges are fixed in this
    // call; levels_[i] is re-resolved per iteration because sift_in can
    // reallocate the level vector.
    size_t norb = levels_[i].orbit_pts.size(), ngen = levels_[i].gens.size();
    for (size_t idx = 0; idx < norb; ++idx) {
      for (size_t k = 0; k < ngen; ++k) {
        Mat4 schreier = [&] {
          ChainLevel& l = levels_[i];
          uint32_t v = act(l.gens[k], l.orbit_pts[idx]);
          uint32_t pos = l.orbit_pos[v];
          if (pos == 0) throw std::logic_error("Chain: orbit not closed");
          return l.transversal_inv[pos - 1] * (l.gens[k] * l.transversal[idx]);
        }();
        if (!schreier.is_identity()) sift_in(std::move(schreier), i + 1);
      }
    }
  }

  const FieldCtx* ctx_;
  uint64_t npoints_ = 0;
  std::vector<ChainLevel> levels_;
};

}  // namespace

uint64_t group_order(const std::vector<Mat4>& gens, OrderStrategy strategy) {
  for (const Mat4& g : gens)
    if (!g.ctx().same_field(gens[0].ctx()))
      throw std::invalid_argument("group_order: mixed fields");
  std::vector<Mat4> work;
  for (const Mat4& g : gens)
    if (!g.is_identity()) work.push_back(g);
  if (work.empty()) return 1;
  const FieldCtx& k = work[0].ctx();
  if (strategy == OrderStrategy::Auto)
    strategy = (ctx_q(k) <= 4) ? OrderStrategy::Bfs : OrderStrategy::Chain;
  if (strategy == OrderStrategy::Bfs) return bfs_order(work);
  uint64_t o1 = Chain(k, work, /*seed=*/0xC0FFEEULL).order();
  uint64_t o2 = Chain(k, work, /*seed=*/0xF005BA11ULL).order();
  if (o1 != o2)
    throw std::logic_error("group_order(Chain): seeds disagree on the order");
  return o1;
}

uint64_t group_order(const Mat4& g1, const Mat4& g2, OrderStrategy strategy) {
  return group_order(std::vector<Mat4>{g1, g2}, strategy);
}

bool is_abc_pair(const Mat4& g1, const Mat4& g2, uint64_t a, uint64_t b,
                 uint64_t c) {
  if (!g1.ctx().same_field(g2.ctx()))
    throw std::invalid_argument("is_abc_pair: mixed fields");
  if (!is_symplectic(g1) || !is_symplectic(g2))
    throw std::invalid_argument("is_abc_pair: inputs must be symplectic");
  if (!g1.pow(a).is_identity()) return false;
  if (!g2.pow(b).is_identity()) return false;
  if (!(g1 * g2).pow(c).is_identity()) return false;
  return group_order(g1, g2) == sp4_order(ctx_q(g1.ctx()));
}

// ----------------------------------------------------- order-3 sampling

std::vector<Mat4> order3_class_reps(const FieldCtx& ctx) {
  std::vector<Mat4> reps;
  const uint64_t q = ctx_q(ctx);
  if (ctx.p == 3) {
    // Unipotent classes: two transvection classes (multiplier square or
    // not), and the two-block classes t_{e1,l} t_{e2,m}; (1,1), (1,nu) and
    // (nu,nu) cover the square-class combinations up to plane swap.
    FieldElement one = ctx.one(), nu = ctx.generator();
    Vec4 e1 = vec4_from_ints(ctx, {1, 0, 0, 0});
    Vec4 e2 = vec4_from_ints(ctx, {0, 0, 1, 0});
    reps.push_back(transvection(ctx, e1, one));
    reps.push_back(transvection(ctx, e1, nu));
    reps.push_back(transvection(ctx, e1, one) * transvection(ctx, e2, one));
    reps.push_back(transvection(ctx, e1, one) * transvection(ctx, e2, nu));
    reps.push_back(transvection(ctx, e1, nu) * transvection(ctx, e2, nu));
  } else if (q % 3 == 1) {
    FieldElement w = ctx.generator().pow((q - 1) / 3);
    FieldElement wi = w.inv(), one = ctx.one();
    reps.push_back(diag4(ctx, w, wi, w, wi));
    reps.push_back(diag4(ctx, w, wi, one, one));
  } else {
    // Cube roots live in the quadratic extension; use companion blocks of
    // T^2 + T + 1.
    const std::array<long, 4> C = {0, -1, 1, -1};
    const std::array<long, 4> I = {1, 0, 0, 1};
    reps.push_back(blockdiag22(ctx, C, C));
    reps.push_back(blockdiag22(ctx, C, I));
  }
  return reps;
}

namespace {

// Distinct primes of |Sp_4(q)|, from the small factors q, q^2-1, q^4-1.
std::vector<uint64_t> sp4_order_primes(uint64_t q) {
  std::vector<uint64_t> primes;
  auto absorb = [&primes](uint64_t n) {
    for (uint64_t d = 2; d * d <= n; ++d) {
      if (n % d != 0) continue;
      primes.push_back(d);
      while (n % d == 0) n /= d;
    }
    if (n > 1) primes.push_back(n);
  };
  absorb(q);
  absorb(q * q - 1);
  absorb(q * q * q * q - 1);
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  return primes;
}

// Exact order of g given that g^n = I and the distinct primes of n.
uint64_t order_from_hint(const Mat4& g, uint64_t n,
                         const std::vector<uint64_t>& primes) {
  uint64_t e = n;
  for (uint64_t p : primes)
    while (e % p == 0 && g.pow(e / p).is_identity()) e /= p;
  return e;
}

Mat4 random_element_from(const std::vector<Mat4>& gens, Rng& rng) {
  Mat4 h = Mat4::identity(gens[0].ctx());
  for (int i = 0; i < 24; ++i) h = h * gens[rng.below(gens.size())];
  return h;
}

Mat4 random_order3_from(const FieldCtx& ctx, const std::vector<Mat4>& gens,
                        const std::vector<uint64_t>& order_primes, Rng& rng) {
  // Mix two strategies: conjugating a class representative (covers the
  // listed classes uniformly) and powering a random element (reaches every
  // order-3 class with positive probability, a safety net should the
  // representative list miss a class on some field).
  if (rng.below(2) == 1) {
    const uint64_t n = sp4_order(ctx_q(ctx));
    for (int tries = 0; tries < 12; ++tries) {
      Mat4 h = random_element_from(gens, rng);
      uint64_t k = order_from_hint(h, n, order_primes);
      if (k % 3 == 0) {
        Mat4 g = h.pow(k / 3);
        if (!g.is_identity()) return g;
      }
    }
    // Fall through to the representative strategy.
  }
  std::vector<Mat4> reps = order3_class_reps(ctx);
  Mat4 r = reps[rng.below(reps.size())];
  Mat4 s = random_element_from(gens, rng);
  return s * r * s.inverse();
}

// Element of order exactly n, by powering random elements.
std::optional<Mat4> random_of_order(const FieldCtx& ctx,
                                    const std::vector<Mat4>& gens,
                                    const std::vector<uint64_t>& order_primes,
                                    uint64_t n, Rng& rng) {
  if (n == 3) return random_order3_from(ctx, gens, order_primes, rng);
  const uint64_t go = sp4_order(ctx_q(ctx));
  for (int tries = 0; tries < 40; ++tries) {
    Mat4 h = random_element_from(gens, rng);
    uint64_t k = order_from_hint(h, go, order_primes);
    if (k % n == 0) {
      Mat4 g = h.pow(k / n);
      if (element_order(g, n) == std::optional<uint64_t>(n)) return g;
    }
  }
  return std::nullopt;
}

bool is_central(const Mat4& g) {
  if (!g.is_scalar()) return false;
  FieldElement d = g.at(0, 0);
  return d * d == g.ctx().one();  // +-1 are the scalars in Sp_4
}

}  // namespace

Mat4 random_element(const FieldCtx& ctx, Rng& rng) {
  return random_element_from(sp4_generators(ctx), rng);
}

Mat4 random_order3(const FieldCtx& ctx, Rng& rng) {
  return random_order3_from(ctx, sp4_generators(ctx),
                            sp4_order_primes(ctx_q(ctx)), rng);
}

CensusResult census_search(const FieldCtx& ctx, uint64_t a, uint64_t b,
                           uint64_t c, uint64_t seed,
                           const CensusBudget& budget, bool central_product) {
  if (a == 0 || b == 0 || c == 0)
    throw std::invalid_argument("census_search: orders must be positive");
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  CensusResult res;
  const uint64_t q = ctx_q(ctx);
  const uint64_t target = sp4_order(q);
  const std::vector<Mat4> gens = sp4_generators(ctx);
  const std::vector<uint64_t> order_primes = sp4_order_primes(q);
  int consecutive_sampling_failures = 0;
  while (res.samples_used < budget.max_samples) {
    ++res.samples_used;
    auto g1 = random_of_order(ctx, gens, order_primes, a, rng);
    auto g2 = g1 ? random_of_order(ctx, gens, order_primes, b, rng)
                 : std::nullopt;
    if (!g1 || !g2) {
      // Persistent failure means elements of the requested order are rare
      // or absent; stop instead of burning the whole sample budget.
      if (++consecutive_sampling_failures >= 5) {
        res.budget_exhausted = true;
        return res;
      }
      continue;
    }
    consecutive_sampling_failures = 0;
    Mat4 prod_pow = (*g1 * *g2).pow(c);
    bool prod_ok =
        central_product ? is_central(prod_pow) : prod_pow.is_identity();
    if (!prod_ok) continue;
    // Cheap necessary conditions for generation, so the expensive order
    // computation is spent only on plausible witnesses: the pair must act
    // absolutely irreducibly, and for order-3 pairs the three trace values
    // t12, c12, t1-2 generate the character field, which must be all of F_q.
    if (!is_absolutely_irreducible(*g1, *g2)) continue;
    if (a == 3 && b == 3) {
      Mat4 prod = *g1 * *g2;
      Mat4 mixed = *g1 * g2->inverse();
      uint32_t d = generated_subfield_degree(
          {prod.trace(), chi2_of(prod), mixed.trace()});
      if (d != ctx.m) continue;
    }
    if (res.order_calls >= budget.max_order_calls) {
      res.budget_exhausted = true;
      return res;
    }
    ++res.order_calls;
    if (group_order(*g1, *g2) == target) {
      res.found = true;
      res.g1 = std::move(g1);
      res.g2 = std::move(g2);
      return res;
    }
  }
  res.budget_exhausted = true;
  return res;
}

bool psp_quotient_test(uint64_t q, uint64_t a, uint64_t b, uint64_t c,
                       uint64_t seed, const CensusBudget& budget) {
  if (q % 2 == 0)
    throw std::invalid_argument("psp_quotient_test: q must be odd");
  if (a % 2 == 0 || b % 2 == 0)
    throw std::invalid_argument(
        "psp_quotient_test: unsupported for even a or b (the lift argument "
        "needs odd orders)");
  // PSp_4(q) is an (a,b,c)-group iff Sp_4(q) has elements of orders a, b
  // whose product has central c-th power and which generate the full group:
  // odd-order elements of the quotient lift to equal-order elements of the
  // double cover, and Sp_4(q) has no index-2 subgroup, so generation modulo
  // the center is generation.
  FieldCtx ctx = make_sp4_field(q);
  return census_search(ctx, a, b, c, seed, budget, /*central_product=*/true)
      .found;
}

}  // namespace trigen
