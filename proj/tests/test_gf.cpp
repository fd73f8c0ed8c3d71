#include <set>

#include "doctest.h"
#include "trigen/gf.hpp"

using namespace trigen;

TEST_CASE("primality") {
  CHECK(is_prime_u64(2));
  CHECK(is_prime_u64(3));
  CHECK(is_prime_u64(1000003));
  CHECK(is_prime_u64((1ull << 31) - 1));
  CHECK(is_prime_u64(1000000007ull));
  CHECK_FALSE(is_prime_u64(0));
  CHECK_FALSE(is_prime_u64(1));
  CHECK_FALSE(is_prime_u64(561));   // Carmichael
  CHECK_FALSE(is_prime_u64(1ull << 40));
}

TEST_CASE("rng determinism and bounds") {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    uint64_t x = a.next();
    CHECK(x == b.next());
    (void)c.next();
  }
  Rng d(7);
  for (int i = 0; i < 1000; ++i) CHECK(d.below(13) < 13);
}

TEST_CASE("prime field arithmetic") {
  FieldCtx k = make_prime(7);
  CHECK(k.order() == 7);
  CHECK(k.from_int(10) == k.from_int(3));
  CHECK(k.from_int(-1) == k.from_int(6));
  CHECK(k.from_mpz(mpz_class("123456789123456789")) == k.from_int(123456789123456789 % 7));
  FieldElement a = k.from_int(3), b = k.from_int(5);
  CHECK((a + b) == k.from_int(1));
  CHECK((a - b) == k.from_int(5));
  CHECK((a * b) == k.from_int(1));
  CHECK(-a == k.from_int(4));
  CHECK(a.inv() * a == k.one());
  CHECK(a.pow(6) == k.one());
  CHECK(a.pow(-2) == (a * a).inv());
  CHECK_THROWS(k.zero().inv());
  CHECK_THROWS(make_prime(6));
  CHECK_THROWS(make_prime(1ull << 32));
}

TEST_CASE("field axioms hold on random samples") {
  for (auto [p, m] : {std::pair<uint64_t, uint32_t>{7, 1}, {2, 5}, {3, 2}, {5, 3}}) {
    FieldCtx k = make_ext(p, m, 17);
    Rng rng(99);
    for (int i = 0; i < 40; ++i) {
      FieldElement a = k.random_element(rng), b = k.random_element(rng), c = k.random_element(rng);
      CHECK(a + b == b + a);
      CHECK(a * b == b * a);
      CHECK((a + b) + c == a + (b + c));
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK(a + (-a) == k.zero());
      CHECK(a * k.one() == a);
      if (!a.is_zero()) CHECK(a * a.inv() == k.one());
    }
  }
}

TEST_CASE("extension construction is deterministic and irreducible") {
  FieldCtx k1 = make_ext(3, 2, 5);
  FieldCtx k2 = make_ext(3, 2, 5);
  CHECK(k1.same_field(k2));
  CHECK(k1.order() == 9);
  CHECK(k1.modulus.size() == 3);
  CHECK(k1.modulus[2] == 1);
  // x^(p^m) == x for all elements (field has the right size)
  Rng rng(1);
  for (int i = 0; i < 20; ++i) {
    FieldElement x = k1.random_element(rng);
    CHECK(x.pow(k1.order()) == x);
  }
  CHECK(make_ext(5, 1, 0).same_field(make_prime(5)));
}

TEST_CASE("multiplicative generator") {
  for (auto [p, m] : {std::pair<uint64_t, uint32_t>{7, 1}, {2, 4}, {3, 2}, {5, 2}}) {
    FieldCtx k = make_ext(p, m, 11);
    FieldElement g = k.generator();
    mpz_class n = k.order() - 1;
    CHECK(g.pow(n) == k.one());
    // g^(n/q) != 1 for each prime q | n: enumerate small primes directly
    for (unsigned long q = 2; mpz_class(q) <= n; ++q) {
      if (n % q == 0) CHECK(g.pow(n / q) != k.one());
    }
    CHECK(k.generator() == g);  // deterministic
  }
}

TEST_CASE("frobenius and element degrees") {
  FieldCtx k = make_ext(3, 4, 7);
  FieldElement g = k.generator();
  CHECK(g.frobenius() == g.pow(3));
  CHECK(element_degree(g) == 4);  // generator never lies in a proper subfield
  CHECK(element_degree(k.one()) == 1);
  CHECK(element_degree(k.from_int(2)) == 1);
  // norm-style element of the quadratic subfield: g^((81-1)/(9-1)) has degree 2
  FieldElement h = g.pow((mpz_class(81) - 1) / 8);
  CHECK(element_degree(h) == 2);
  CHECK(generated_subfield_degree({k.one(), k.from_int(2)}) == 1);
  CHECK(generated_subfield_degree({h, k.from_int(2)}) == 2);
  CHECK(generated_subfield_degree({h, g}) == 4);
  CHECK(generated_subfield_degree({}) == 1);
}

TEST_CASE("embedding is a field homomorphism fixing the prime field") {
  FieldCtx src = make_ext(3, 2, 5);
  FieldCtx dst = make_ext(3, 4, 7);
  Embedding e(src, dst);
  Rng rng(12);
  for (int i = 0; i < 30; ++i) {
    FieldElement a = src.random_element(rng), b = src.random_element(rng);
    CHECK(e(a + b) == e(a) + e(b));
    CHECK(e(a * b) == e(a) * e(b));
    CHECK(element_degree(e(a)) == element_degree(a));
  }
  for (long c = 0; c < 3; ++c) CHECK(e(src.from_int(c)) == dst.from_int(c));
  // injectivity on a sample
  std::set<std::vector<uint64_t>> images;
  for (long i = 0; i < 9; ++i) {
    std::vector<uint64_t> rep{static_cast<uint64_t>(i % 3), static_cast<uint64_t>(i / 3)};
    images.insert(e(src.element(rep)).rep());
  }
  CHECK(images.size() == 9);
  // prime -> extension embedding
  Embedding pe(make_prime(3), dst);
  CHECK(pe(make_prime(3).from_int(2)) == dst.from_int(2));
  // identity embedding
  Embedding id(src, src);
  FieldElement x = src.generator();
  CHECK(id(x) == x);
  CHECK_THROWS(Embedding(make_ext(3, 3, 1), dst));  // 3 does not divide 4
}

TEST_CASE("element validation") {
  FieldCtx k = make_ext(2, 3, 1);
  CHECK_THROWS(k.element({0, 1}));        // wrong length
  CHECK_THROWS(k.element({0, 2, 0}));     // limb out of range
  CHECK(k.element({1, 1, 0}) == k.element({1, 1, 0}));
  FieldCtx k7 = make_prime(7);
  CHECK_THROWS(k7.from_int(3) + k.from_int(1));  // mixed contexts
}
