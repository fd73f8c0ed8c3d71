#include "trigen/rigidity.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <stdexcept>
#include <utility>

namespace trigen {
namespace {

constexpr long kTripleMax = 1000000L;
constexpr int kRankMax = 100000000;

bool is_prime_long(long p) {
  if (p < 2) return false;
  for (long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

void check_characteristic(long p) {
  if (p != 0 && !is_prime_long(p))
    throw std::invalid_argument("characteristic must be 0 or a prime");
}

std::string group_label_for(Family f, int rank, Isogeny iso) {
  switch (f) {
    case Family::A: {
      const std::string n = std::to_string(rank + 1);
      if (iso == Isogeny::Adjoint) return "PSL_" + n + "(K)";
      if (iso == Isogeny::SimplyConnected) return "SL_" + n + "(K)";
      return "SL_" + n + "(K)/C";
    }
    case Family::B: {
      const std::string n = std::to_string(2 * rank + 1);
      return (iso == Isogeny::Adjoint ? "SO_" : "Spin_") + n + "(K)";
    }
    case Family::C: {
      const std::string n = std::to_string(2 * rank);
      return (iso == Isogeny::Adjoint ? "PSp_" : "Sp_") + n + "(K)";
    }
    case Family::D: {
      const std::string n = std::to_string(2 * rank);
      if (iso == Isogeny::Adjoint) return "PSO_" + n + "(K)";
      if (iso == Isogeny::SimplyConnected) return "Spin_" + n + "(K)";
      return "SO_or_HSpin_" + n + "(K)";
    }
    case Family::G2: return "G_2(K)";
    case Family::F4: return "F_4(K)";
    case Family::E6: return "E_6(K)";
    case Family::E7: return "E_7(K)";
    case Family::E8: return "E_8(K)";
  }
  return "?";
}

// Triple pattern for a table row: each coordinate fixed or free with a
// lower bound.
struct Pat {
  long a, b, c;
  bool af, bf, cf;
};

Pat exact(long a, long b, long c) { return {a, b, c, true, true, true}; }
Pat free3(long amin = 1) { return {amin, 1, 1, false, false, false}; }
Pat afix(long a) { return {a, 1, 1, true, false, false}; }
Pat afix_bmin(long a, long bmin) { return {a, bmin, 1, true, false, false}; }
Pat abfix(long a, long b) { return {a, b, 1, true, true, false}; }
Pat abfix_cmin(long a, long b, long cmin) { return {a, b, cmin, true, true, false}; }

std::string pat_label(const Pat& p) {
  std::string out = "(";
  out += p.af ? std::to_string(p.a) : "a";
  out += ",";
  out += p.bf ? std::to_string(p.b) : "b";
  out += ",";
  out += p.cf ? std::to_string(p.c) : "c";
  out += ")";
  if (!p.af && p.a > 1) out += " a >= " + std::to_string(p.a);
  if (!p.bf && p.b > 1) out += " b >= " + std::to_string(p.b);
  if (!p.cf && p.c > 1) out += " c >= " + std::to_string(p.c);
  return out;
}

void add_row(std::vector<TableRow>& out, int table, Family fam, int rank,
             CharCond pc, const Pat& p) {
  TableRow r;
  r.table = table;
  r.family = fam;
  r.rank = rank;
  r.pcond = pc;
  r.amin = p.a;
  r.bmin = p.b;
  r.cmin = p.c;
  r.afix = p.af;
  r.bfix = p.bf;
  r.cfix = p.cf;
  const Isogeny iso = table == 1 ? Isogeny::Adjoint : Isogeny::SimplyConnected;
  r.group_label = group_label_for(fam, rank, iso);
  r.p_label = pc == CharCond::Any ? "any" : pc == CharCond::Two ? "= 2" : "!= 2";
  r.pattern_label = pat_label(p);
  r.provenance = "table " + std::to_string(table) + ": " + r.group_label +
                 ", p " + r.p_label + ", " + r.pattern_label;
  out.push_back(std::move(r));
}

// Rigid triples, adjoint type.
std::vector<TableRow> build_table1() {
  std::vector<TableRow> rows;
  const CharCond any = CharCond::Any;
  add_row(rows, 1, Family::A, 1, any, free3());
  add_row(rows, 1, Family::A, 2, any, afix(2));
  add_row(rows, 1, Family::A, 3, any, abfix(2, 3));
  add_row(rows, 1, Family::A, 4, any, abfix(2, 3));
  add_row(rows, 1, Family::C, 2, any, abfix(2, 3));
  add_row(rows, 1, Family::C, 2, any, abfix(3, 3));
  add_row(rows, 1, Family::G2, 2, any, exact(2, 4, 5));
  add_row(rows, 1, Family::G2, 2, any, exact(2, 5, 5));
  return rows;
}

// Reducible triples, simply connected type.
std::vector<TableRow> build_table3() {
  std::vector<TableRow> rows;
  const CharCond n2 = CharCond::NotTwo;
  add_row(rows, 3, Family::A, 1, n2, afix(2));
  add_row(rows, 3, Family::C, 2, n2, abfix(2, 3));
  add_row(rows, 3, Family::C, 2, n2, abfix(2, 4));
  add_row(rows, 3, Family::C, 2, n2, exact(3, 3, 4));
  add_row(rows, 3, Family::C, 2, n2, exact(3, 4, 4));
  add_row(rows, 3, Family::C, 2, n2, exact(4, 4, 4));
  add_row(rows, 3, Family::C, 3, n2, abfix(2, 3));
  add_row(rows, 3, Family::C, 3, n2, abfix(2, 4));
  add_row(rows, 3, Family::C, 3, n2, exact(2, 5, 5));
  add_row(rows, 3, Family::C, 3, n2, exact(2, 5, 6));
  add_row(rows, 3, Family::C, 3, n2, exact(2, 6, 6));
  add_row(rows, 3, Family::C, 4, n2, exact(2, 3, 7));
  add_row(rows, 3, Family::C, 4, n2, exact(2, 3, 8));
  add_row(rows, 3, Family::C, 4, n2, exact(2, 4, 5));
  add_row(rows, 3, Family::C, 4, n2, exact(2, 4, 6));
  add_row(rows, 3, Family::C, 5, n2, exact(2, 3, 7));
  add_row(rows, 3, Family::C, 5, n2, exact(2, 3, 8));
  add_row(rows, 3, Family::C, 5, n2, exact(2, 3, 9));
  add_row(rows, 3, Family::C, 5, n2, exact(2, 3, 10));
  add_row(rows, 3, Family::C, 5, n2, exact(2, 4, 5));
  add_row(rows, 3, Family::C, 5, n2, exact(2, 4, 6));
  add_row(rows, 3, Family::C, 6, n2, exact(2, 3, 7));
  add_row(rows, 3, Family::C, 6, n2, exact(2, 3, 8));
  add_row(rows, 3, Family::C, 6, n2, exact(2, 4, 5));
  add_row(rows, 3, Family::C, 7, n2, exact(2, 3, 7));
  add_row(rows, 3, Family::C, 7, n2, exact(2, 3, 8));
  add_row(rows, 3, Family::C, 7, n2, exact(2, 4, 5));
  add_row(rows, 3, Family::C, 8, n2, exact(2, 3, 7));
  add_row(rows, 3, Family::C, 9, n2, exact(2, 3, 7));
  add_row(rows, 3, Family::C, 11, n2, exact(2, 3, 7));
  return rows;
}

// Rigid triples, simply connected type.
std::vector<TableRow> build_table4() {
  std::vector<TableRow> rows;
  const CharCond any = CharCond::Any, p2 = CharCond::Two, n2 = CharCond::NotTwo;
  add_row(rows, 4, Family::A, 1, p2, free3());
  add_row(rows, 4, Family::A, 1, n2, free3(3));
  add_row(rows, 4, Family::A, 2, any, afix(2));
  add_row(rows, 4, Family::A, 3, p2, abfix(2, 3));
  add_row(rows, 4, Family::A, 3, n2, abfix(2, 3));
  add_row(rows, 4, Family::A, 3, n2, abfix(2, 4));
  add_row(rows, 4, Family::A, 3, n2, exact(3, 3, 4));
  add_row(rows, 4, Family::A, 3, n2, exact(3, 4, 4));
  add_row(rows, 4, Family::A, 3, n2, exact(4, 4, 4));
  add_row(rows, 4, Family::A, 4, any, abfix(2, 3));
  add_row(rows, 4, Family::A, 5, n2, abfix(2, 3));
  add_row(rows, 4, Family::A, 5, n2, exact(2, 4, 5));
  add_row(rows, 4, Family::A, 5, n2, exact(2, 4, 6));
  add_row(rows, 4, Family::A, 9, n2, exact(2, 3, 7));
  add_row(rows, 4, Family::C, 2, p2, abfix(2, 3));
  add_row(rows, 4, Family::C, 2, p2, abfix(3, 3));
  add_row(rows, 4, Family::C, 2, n2, afix_bmin(2, 5));
  add_row(rows, 4, Family::C, 2, n2, abfix_cmin(3, 3, 5));
  add_row(rows, 4, Family::C, 2, n2, abfix_cmin(3, 4, 5));
  add_row(rows, 4, Family::C, 2, n2, abfix_cmin(4, 4, 5));
  add_row(rows, 4, Family::C, 3, n2, abfix_cmin(2, 5, 7));
  add_row(rows, 4, Family::C, 3, n2, abfix_cmin(2, 6, 7));
  add_row(rows, 4, Family::C, 3, n2, exact(3, 3, 4));
  add_row(rows, 4, Family::C, 3, n2, exact(3, 4, 4));
  add_row(rows, 4, Family::C, 3, n2, exact(4, 4, 4));
  add_row(rows, 4, Family::C, 4, n2, abfix_cmin(2, 3, 9));
  add_row(rows, 4, Family::C, 4, n2, exact(2, 4, 7));
  add_row(rows, 4, Family::C, 4, n2, exact(2, 4, 8));
  add_row(rows, 4, Family::C, 4, n2, exact(2, 5, 5));
  add_row(rows, 4, Family::C, 4, n2, exact(2, 5, 6));
  add_row(rows, 4, Family::C, 4, n2, exact(2, 6, 6));
  add_row(rows, 4, Family::C, 5, n2, abfix_cmin(2, 3, 11));
  add_row(rows, 4, Family::C, 5, n2, exact(2, 4, 7));
  add_row(rows, 4, Family::C, 5, n2, exact(2, 4, 8));
  add_row(rows, 4, Family::C, 6, n2, exact(2, 3, 9));
  add_row(rows, 4, Family::C, 6, n2, exact(2, 3, 10));
  add_row(rows, 4, Family::C, 6, n2, exact(2, 4, 6));
  add_row(rows, 4, Family::C, 7, n2, exact(2, 3, 9));
  add_row(rows, 4, Family::C, 7, n2, exact(2, 3, 10));
  add_row(rows, 4, Family::C, 7, n2, exact(2, 4, 6));
  add_row(rows, 4, Family::C, 8, n2, exact(2, 3, 8));
  add_row(rows, 4, Family::C, 8, n2, exact(2, 4, 5));
  add_row(rows, 4, Family::C, 9, n2, exact(2, 3, 8));
  add_row(rows, 4, Family::C, 9, n2, exact(2, 4, 5));
  add_row(rows, 4, Family::C, 10, n2, exact(2, 3, 7));
  add_row(rows, 4, Family::C, 12, n2, exact(2, 3, 7));
  add_row(rows, 4, Family::C, 13, n2, exact(2, 3, 7));
  add_row(rows, 4, Family::B, 5, n2, exact(2, 3, 7));
  add_row(rows, 4, Family::D, 6, n2, exact(2, 3, 7));
  return rows;
}

std::string upper(const std::string& s) {
  std::string out = s;
  for (char& ch : out) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return out;
}

std::string lower(const std::string& s) {
  std::string out = s;
  for (char& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

}  // namespace

Triple::Triple(long a, long b, long c) : a_(a), b_(b), c_(c) {
  if (a_ < 1 || b_ < 1 || c_ < 1)
    throw std::invalid_argument("triple entries must be positive");
  if (a_ > kTripleMax || b_ > kTripleMax || c_ > kTripleMax)
    throw std::invalid_argument("triple entries exceed 10^6");
  if (a_ > b_) std::swap(a_, b_);
  if (b_ > c_) std::swap(b_, c_);
  if (a_ > b_) std::swap(a_, b_);
}

bool Triple::hyperbolic() const {
  const long long a = a_, b = b_, c = c_;
  return b * c + a * c + a * b < a * b * c;
}

bool Triple::operator==(const Triple& o) const {
  return a_ == o.a_ && b_ == o.b_ && c_ == o.c_;
}

std::string Triple::str() const {
  return "(" + std::to_string(a_) + "," + std::to_string(b_) + "," +
         std::to_string(c_) + ")";
}

bool triple_leq(const Triple& x, const Triple& y) {
  return x.a() <= y.a() && x.b() <= y.b() && x.c() <= y.c();
}

std::string to_string(Family f) {
  switch (f) {
    case Family::A: return "A";
    case Family::B: return "B";
    case Family::C: return "C";
    case Family::D: return "D";
    case Family::G2: return "G2";
    case Family::F4: return "F4";
    case Family::E6: return "E6";
    case Family::E7: return "E7";
    case Family::E8: return "E8";
  }
  return "?";
}

std::string to_string(Isogeny iso) {
  switch (iso) {
    case Isogeny::Adjoint: return "adjoint";
    case Isogeny::SimplyConnected: return "simply_connected";
    case Isogeny::Other: return "other";
  }
  return "?";
}

std::optional<Family> family_from_string(const std::string& s) {
  const std::string u = upper(s);
  if (u == "A") return Family::A;
  if (u == "B") return Family::B;
  if (u == "C") return Family::C;
  if (u == "D") return Family::D;
  if (u == "G2") return Family::G2;
  if (u == "F4") return Family::F4;
  if (u == "E6") return Family::E6;
  if (u == "E7") return Family::E7;
  if (u == "E8") return Family::E8;
  return std::nullopt;
}

std::optional<Isogeny> isogeny_from_string(const std::string& s) {
  const std::string l = lower(s);
  if (l == "adjoint") return Isogeny::Adjoint;
  if (l == "sc" || l == "simply_connected" || l == "simplyconnected")
    return Isogeny::SimplyConnected;
  if (l == "other") return Isogeny::Other;
  return std::nullopt;
}

std::string GroupDescriptor::label() const {
  return group_label_for(family, rank, isogeny);
}

GroupDescriptor make_group(Family f, int rank, Isogeny iso) {
  GroupDescriptor g;
  g.family = f;
  g.rank = rank;
  g.isogeny = iso;
  const long long r = rank;
  const auto need = [](bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
  };
  switch (f) {
    case Family::A:
      need(rank >= 1 && rank <= kRankMax, "type A requires rank >= 1");
      g.coxeter_h = static_cast<long>(r + 1);
      g.dim = static_cast<long>(r * (r + 2));
      g.cartan_det = static_cast<long>(r + 1);
      break;
    case Family::B:
      need(rank >= 3 && rank <= kRankMax,
           "type B requires rank >= 3 (B_2 coincides with C_2)");
      g.coxeter_h = static_cast<long>(2 * r);
      g.dim = static_cast<long>(r * (2 * r + 1));
      g.cartan_det = 2;
      break;
    case Family::C:
      need(rank >= 2 && rank <= kRankMax, "type C requires rank >= 2");
      g.coxeter_h = static_cast<long>(2 * r);
      g.dim = static_cast<long>(r * (2 * r + 1));
      g.cartan_det = 2;
      break;
    case Family::D:
      need(rank >= 4 && rank <= kRankMax,
           "type D requires rank >= 4 (D_3 coincides with A_3)");
      g.coxeter_h = static_cast<long>(2 * r - 2);
      g.dim = static_cast<long>(r * (2 * r - 1));
      g.cartan_det = 4;
      break;
    case Family::G2:
      need(rank == 2, "type G2 has rank 2");
      g.coxeter_h = 6;
      g.dim = 14;
      g.cartan_det = 1;
      break;
    case Family::F4:
      need(rank == 4, "type F4 has rank 4");
      g.coxeter_h = 12;
      g.dim = 52;
      g.cartan_det = 1;
      break;
    case Family::E6:
      need(rank == 6, "type E6 has rank 6");
      g.coxeter_h = 12;
      g.dim = 78;
      g.cartan_det = 3;
      break;
    case Family::E7:
      need(rank == 7, "type E7 has rank 7");
      g.coxeter_h = 18;
      g.dim = 133;
      g.cartan_det = 2;
      break;
    case Family::E8:
      need(rank == 8, "type E8 has rank 8");
      g.coxeter_h = 30;
      g.dim = 248;
      g.cartan_det = 1;
      break;
  }
  if (iso == Isogeny::Other) {
    // The centre must have a proper nontrivial subgroup: type A with
    // rank+1 composite (SL_n/C), or type D (SO_{2r} / HSpin_{2r}).
    bool ok = false;
    if (f == Family::A) {
      const long n = rank + 1;
      for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) {
          ok = true;
          break;
        }
    } else if (f == Family::D) {
      ok = true;
    }
    need(ok, "isogeny Other requires type A with rank+1 composite, or type D");
  }
  return g;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Reducible: return "reducible";
    case Verdict::Rigid: return "rigid";
    case Verdict::Nonrigid: return "nonrigid";
  }
  return "?";
}

long du_type_A(long ell, long u) {
  if (ell < 1 || ell > kRankMax)
    throw std::invalid_argument("du_type_A: rank out of range");
  if (u < 1) throw std::invalid_argument("du_type_A: u must be positive");
  const long long h = ell + 1;
  const long long z = h / u, e = h % u;
  return static_cast<long>(z * z * u + e * (2 * z + 1) - 1);
}

TripleVerdict classify_adjoint_A(long ell, const Triple& t) {
  if (!t.hyperbolic())
    throw std::invalid_argument("classify_adjoint_A requires a hyperbolic triple");
  const GroupDescriptor g =
      make_group(Family::A, static_cast<int>(ell), Isogeny::Adjoint);
  const long S =
      du_type_A(ell, t.a()) + du_type_A(ell, t.b()) + du_type_A(ell, t.c());
  const long D = S - g.dim;
  const Verdict v = D > 0   ? Verdict::Reducible
                    : D == 0 ? Verdict::Rigid
                             : Verdict::Nonrigid;
  if (ell <= 4) {
    // The embedded rigid-adjoint table is exact for these ranks; the formula
    // route and the table route must agree.
    const auto hit = table_lookup(g, t, 0);
    if (!hit || hit->verdict != v)
      throw std::logic_error(
          "classify_adjoint_A: formula verdict disagrees with the embedded "
          "table at rank " +
          std::to_string(ell) + " for " + t.str());
  }
  return TripleVerdict{t, g, v, S, D};
}

mpq_class nonrigidity_bound(long h, const Triple& t) {
  if (h < 2) throw std::invalid_argument("nonrigidity_bound: h must be >= 2");
  mpq_class h2(h);
  h2 *= h;
  if (t == Triple(2, 3, 7)) return mpq_class(1) - h2 / 42;
  if (t == Triple(2, 4, 5)) return mpq_class(3, 4) - h2 / 20;
  if (t == Triple(3, 3, 4)) return mpq_class(1, 2) - h2 / 12;
  throw std::invalid_argument(
      "nonrigidity_bound: supported only for (2,3,7), (2,4,5) and (3,3,4)");
}

namespace {
void check_partition(long n, const std::vector<long>& parts, const char* what) {
  if (n < 1 || n > kTripleMax)
    throw std::invalid_argument(std::string(what) + ": n out of range");
  if (parts.empty())
    throw std::invalid_argument(std::string(what) + ": empty partition");
  long long sum = 0;
  for (long m : parts) {
    if (m < 1)
      throw std::invalid_argument(std::string(what) + ": parts must be positive");
    sum += m;
  }
  if (sum != n)
    throw std::invalid_argument(std::string(what) + ": parts must sum to n");
}
}  // namespace

long class_dim_semisimple(long n, const std::vector<long>& mults) {
  check_partition(n, mults, "class_dim_semisimple");
  long long s = 0;
  for (long m : mults) s += static_cast<long long>(m) * m;
  return static_cast<long>(static_cast<long long>(n) * n - s);
}

long class_dim_unipotent(long n, const std::vector<long>& jordan) {
  check_partition(n, jordan, "class_dim_unipotent");
  long long s = 0;
  for (long t : conjugate_partition(jordan)) s += static_cast<long long>(t) * t;
  return static_cast<long>(static_cast<long long>(n) * n - s);
}

std::vector<long> conjugate_partition(const std::vector<long>& parts) {
  for (long p : parts)
    if (p < 1)
      throw std::invalid_argument("conjugate_partition: parts must be positive");
  if (parts.empty()) return {};
  std::vector<long> sorted = parts;
  std::sort(sorted.begin(), sorted.end(), std::greater<long>());
  std::vector<long> conj(static_cast<size_t>(sorted.front()), 0);
  for (size_t i = 0; i < conj.size(); ++i) {
    long cnt = 0;
    for (long p : sorted)
      if (p >= static_cast<long>(i) + 1) ++cnt;
    conj[i] = cnt;
  }
  return conj;
}

Verdict g_triple_classify(long dimH, const std::array<long, 3>& maxdims) {
  if (dimH < 1)
    throw std::invalid_argument("g_triple_classify: dimH must be positive");
  long long sum = 0;
  for (long d : maxdims) {
    if (d < 0)
      throw std::invalid_argument(
          "g_triple_classify: class dimensions are nonnegative");
    sum += d;
  }
  const long long twice = 2LL * dimH;
  if (sum < twice) return Verdict::Reducible;
  if (sum == twice) return Verdict::Rigid;
  return Verdict::Nonrigid;
}

bool TableRow::matches_triple(const Triple& t) const {
  const auto coord = [](bool fix, long bound, long v) {
    return fix ? v == bound : v >= bound;
  };
  return coord(afix, amin, t.a()) && coord(bfix, bmin, t.b()) &&
         coord(cfix, cmin, t.c());
}

bool TableRow::matches_char(long characteristic) const {
  switch (pcond) {
    case CharCond::Any: return true;
    case CharCond::Two: return characteristic == 2;
    case CharCond::NotTwo: return characteristic != 2;
  }
  return false;
}

const std::vector<TableRow>& table_rows(int which) {
  static const std::vector<TableRow> t1 = build_table1();
  static const std::vector<TableRow> t3 = build_table3();
  static const std::vector<TableRow> t4 = build_table4();
  switch (which) {
    case 1: return t1;
    case 3: return t3;
    case 4: return t4;
    default:
      throw std::invalid_argument("table_rows: tables are numbered 1, 3 and 4");
  }
}

std::optional<TableHit> table_lookup(const GroupDescriptor& g, const Triple& t,
                                     long characteristic) {
  check_characteristic(characteristic);
  if (!t.hyperbolic())
    throw std::invalid_argument("table_lookup requires a hyperbolic triple");
  Isogeny iso = g.isogeny;
  if (iso == Isogeny::Other) return std::nullopt;
  // Trivial centre: a single isogeny class, carried by the adjoint table.
  if (g.cartan_det == 1) iso = Isogeny::Adjoint;

  const auto find = [&](int which) -> const TableRow* {
    for (const TableRow& row : table_rows(which))
      if (row.family == g.family && row.rank == g.rank &&
          row.matches_char(characteristic) && row.matches_triple(t))
        return &row;
    return nullptr;
  };

  if (iso == Isogeny::Adjoint) {
    if (const TableRow* row = find(1))
      return TableHit{Verdict::Rigid, row->provenance};
    return TableHit{Verdict::Nonrigid,
                    "no row of table 1 matches; the adjoint classification is "
                    "exact, so the triple is nonrigid"};
  }
  if (const TableRow* row = find(4))
    return TableHit{Verdict::Rigid, row->provenance};
  if (const TableRow* row = find(3))
    return TableHit{Verdict::Reducible, row->provenance};
  return TableHit{Verdict::Nonrigid,
                  "no row of tables 4 or 3 matches; the simply connected "
                  "classification is exact, so the triple is nonrigid"};
}

std::vector<long> open_primes(const GroupDescriptor& g, const Triple& t) {
  std::vector<long> primes;
  const auto add_factors = [&primes](long v) {
    for (long d = 2; d * d <= v; ++d)
      while (v % d == 0) {
        primes.push_back(d);
        v /= d;
      }
    if (v > 1) primes.push_back(v);
  };
  add_factors(t.a());
  add_factors(t.b());
  add_factors(t.c());
  add_factors(g.cartan_det);
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  return primes;
}

}  // namespace trigen
