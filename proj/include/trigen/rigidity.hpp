#pragma once

// Rigidity classification of hyperbolic triples (a, b, c) against simple
// algebraic groups: d_u codimensions for adjoint type A, the exact rational
// nonrigidity bounds, conjugacy-class dimension calculators, the G-in-H
// triple classifier, and the three classification tables (rigid adjoint,
// rigid simply connected, reducible) embedded as verified row data.
//
// Conventions.  A triple is rigid (reducible, nonrigid) for G when
// S = d_a + d_b + d_c is equal to (greater than, smaller than) dim G, where
// d_u is the minimal centralizer dimension over elements of order dividing
// u.  Equivalently, with class dimensions j_u = dim G - d_u, the triple is
// rigid when j_a + j_b + j_c = 2 dim G, reducible when the sum is smaller
// and nonrigid when it is larger; g_triple_classify uses that second form.

#include <gmpxx.h>

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace trigen {

// Triple of positive integers, stored sorted ascending.  Entries are capped
// at 10^6 so all derived products fit in 64 bits.
class Triple {
 public:
  Triple(long a, long b, long c);

  long a() const { return a_; }
  long b() const { return b_; }
  long c() const { return c_; }

  // 1/a + 1/b + 1/c < 1, decided in exact integer arithmetic.
  bool hyperbolic() const;

  bool operator==(const Triple& o) const;
  bool operator!=(const Triple& o) const { return !(*this == o); }

  std::string str() const;  // "(2,3,7)"

 private:
  long a_, b_, c_;
};

// Componentwise partial order on sorted triples.  Exactly three hyperbolic
// triples are minimal for it: (2,3,7), (2,4,5) and (3,3,4).
bool triple_leq(const Triple& x, const Triple& y);

enum class Family { A, B, C, D, G2, F4, E6, E7, E8 };
enum class Isogeny { Adjoint, SimplyConnected, Other };

std::string to_string(Family f);
std::string to_string(Isogeny iso);
// Parses "A", "B", "C", "D", "G2", "F4", "E6", "E7", "E8" (case-insensitive).
std::optional<Family> family_from_string(const std::string& s);
// Parses "adjoint", "sc" / "simply_connected", "other" (case-insensitive).
std::optional<Isogeny> isogeny_from_string(const std::string& s);

// A simple algebraic group given by Lie type, rank and isogeny class, with
// the derived Coxeter number, dimension and Cartan matrix determinant.
struct GroupDescriptor {
  Family family = Family::A;
  int rank = 1;
  Isogeny isogeny = Isogeny::Adjoint;
  long coxeter_h = 2;   // type A: rank+1; B/C: 2 rank; D: 2 rank-2
  long dim = 3;         // type A: rank (rank+2); B/C: rank (2 rank+1); D: rank (2 rank-1)
  long cartan_det = 2;  // A: rank+1; B/C: 2; D: 4; G2/F4/E8: 1; E6: 3; E7: 2

  // "PSL_5(K)", "Sp_12(K)", "Spin_11(K)", "G_2(K)", ... by family and isogeny.
  std::string label() const;
};

// Validates rank ranges (A: >=1, B: >=3, C: >=2, D: >=4, exceptional ranks
// fixed; B_2 and D_3 are rejected in favour of their C_2 / A_3 aliases) and
// isogeny (Other requires a centre with a proper nontrivial subgroup: type A
// with rank+1 composite, or type D).  Throws std::invalid_argument.
GroupDescriptor make_group(Family f, int rank, Isogeny iso);

enum class Verdict { Reducible, Rigid, Nonrigid };
std::string to_string(Verdict v);

// Minimal centralizer dimension d_u for the adjoint group of type A_ell:
// with h = ell+1 = z u + e, 0 <= e <= u-1, this is z^2 u + e (2z+1) - 1,
// equal to ell for all u >= h and non-increasing in u.
long du_type_A(long ell, long u);

struct TripleVerdict {
  Triple triple;
  GroupDescriptor group;
  Verdict verdict = Verdict::Rigid;
  long S = 0;  // d_a + d_b + d_c
  long D = 0;  // S - dim G; > 0 reducible, = 0 rigid, < 0 nonrigid
};

// Classifies a hyperbolic triple for the adjoint group of type A_ell from
// the d_u formula.  For ell <= 4 the verdict is cross-checked against the
// embedded rigid-adjoint table (whose classification is exact); a mismatch
// throws std::logic_error.  Non-hyperbolic triples are rejected with
// std::invalid_argument.
TripleVerdict classify_adjoint_A(long ell, const Triple& t);

// Exact upper bound for D = S - dim G for the adjoint group of type A with
// Coxeter number h >= 2, available for the three minimal hyperbolic
// triples:
//   (2,3,7): 1 - h^2/42     (negative from h = 7 on)
//   (2,4,5): 3/4 - h^2/20   (negative from h = 4 on)
//   (3,3,4): 1/2 - h^2/12   (negative from h = 3 on)
// A negative value proves the triple, and every triple above it in the
// partial order, nonrigid.  Other triples throw std::invalid_argument.
mpq_class nonrigidity_bound(long h, const Triple& t);

// Dimension n^2 - sum m_i^2 of the conjugacy class in SL_n / GL_n of a
// diagonalizable element with eigenvalue multiplicities mults (a partition
// of n, any order).  Throws std::invalid_argument on a non-partition.
long class_dim_semisimple(long n, const std::vector<long>& mults);

// Dimension n^2 - sum (t_i)^2 of the conjugacy class of a unipotent element
// with Jordan block sizes jordan (a partition of n), where t is the
// conjugate partition.
long class_dim_unipotent(long n, const std::vector<long>& jordan);

// Conjugate (transpose) partition, input in any order, output descending.
std::vector<long> conjugate_partition(const std::vector<long>& parts);

// G-in-H verdict from class-dimension maxima: the sum of maxdims is
// compared with 2 dimH; smaller = reducible, equal = rigid, larger =
// nonrigid.  (Note the direction differs from the centralizer form above.)
Verdict g_triple_classify(long dimH, const std::array<long, 3>& maxdims);

enum class CharCond { Any, Two, NotTwo };

// One row of a classification table: a group, a characteristic condition
// and a triple pattern.  Pattern coordinates are each either fixed to a
// value or free with a lower bound ("(2,3,c) c >= 9"); free coordinates of
// sorted hyperbolic triples need no upper bounds.
struct TableRow {
  int table = 1;  // 1 = rigid adjoint, 3 = reducible, 4 = rigid simply connected
  Family family = Family::A;
  int rank = 1;
  CharCond pcond = CharCond::Any;
  long amin = 1, bmin = 1, cmin = 1;
  bool afix = false, bfix = false, cfix = false;

  std::string group_label;    // "PSL_2(K)", "Sp_10(K)", ...
  std::string p_label;        // "any", "= 2", "!= 2"
  std::string pattern_label;  // "(2,b,c) b >= 5", "(3,3,4)", ...
  std::string provenance;     // "table 4: Sp_4(K), p != 2, (3,3,c) c >= 5"

  bool matches_triple(const Triple& t) const;
  // Characteristic 0 or a prime; "!= 2" admits 0.
  bool matches_char(long characteristic) const;
};

// The rows of table 1 (rigid, adjoint), 3 (reducible, simply connected) or
// 4 (rigid, simply connected).  Any other argument throws
// std::invalid_argument.
const std::vector<TableRow>& table_rows(int which);

struct TableHit {
  Verdict verdict = Verdict::Rigid;
  std::string provenance;
};

// Table-backed classification of a hyperbolic triple for a group over
// characteristic p (0 or a prime).  Adjoint groups resolve against table 1,
// simply connected groups against tables 4 then 3; since the tables are
// exact, any unmatched hyperbolic triple is nonrigid.  Families with
// Cartan determinant 1 have a single isogeny class and are looked up as
// adjoint.  Isogeny Other (SL_n/C, SO_n, HSpin_n) is not resolved here and
// yields nullopt.  Non-hyperbolic triples and invalid characteristics throw
// std::invalid_argument.
std::optional<TableHit> table_lookup(const GroupDescriptor& g, const Triple& t,
                                     long characteristic);

// The finiteness criterion for a rigid triple excludes characteristics
// dividing a*b*c*cartan_det; these are the primes left open.  Sorted,
// distinct.
std::vector<long> open_primes(const GroupDescriptor& g, const Triple& t);

}  // namespace trigen
