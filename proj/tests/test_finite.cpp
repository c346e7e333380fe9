#include "doctest.h"
#include "sqdense/error.hpp"
#include "sqdense/finite.hpp"

using namespace sqd;

namespace {

FqPoly P(const FqtRing& A, const char* text) { return A.parse(text); }

// Oracle: divide out every monic polynomial of degree >= 1 squared, by brute
// enumeration of candidate divisors (no use of derivatives).
bool oracle_squarefree(const FqtRing& A, const FqPoly& a) {
  const int half = a.degree() / 2;
  std::uint64_t limit = 1;
  for (int i = 0; i <= half; ++i) limit *= A.q();
  for (std::uint64_t idx = A.q(); idx < limit; ++idx) {
    FqPoly d = A.from_index(idx);
    if (d.lead() != 1) continue;
    if (A.rem(a, A.mul(d, d)).is_zero()) return false;
  }
  return true;
}

// Oracle: a is irreducible iff no monic divisor of degree 1..deg/2.
bool oracle_irreducible(const FqtRing& A, const FqPoly& a) {
  if (a.degree() < 1) return false;
  std::uint64_t limit = 1;
  for (int i = 0; i <= a.degree() / 2; ++i) limit *= A.q();
  for (std::uint64_t idx = A.q(); idx < limit; ++idx) {
    FqPoly d = A.from_index(idx);
    if (d.lead() == 1 && A.rem(a, d).is_zero()) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("field construction") {
  auto f4 = Fq::make(4);
  CHECK(f4->p() == 2);
  CHECK(f4->e() == 2);
  CHECK(f4->modulus() == std::vector<std::uint32_t>{1, 1, 1});
  for (std::uint32_t a = 1; a < 4; ++a) CHECK(f4->mul(a, f4->inv(a)) == 1);
  auto f9 = Fq::make(9);
  for (std::uint32_t a = 1; a < 9; ++a) CHECK(f9->mul(a, f9->inv(a)) == 1);
  CHECK(f9->render(5) == "[2,1]");
  CHECK(f9->from_digits({2, 1}) == 5);
  CHECK_THROWS_AS(f9->from_digits({3}), DomainError);
  CHECK_THROWS_AS(Fq::make(6), DomainError);
  CHECK_THROWS_AS(Fq::make(128), BudgetError);
  CHECK_THROWS_AS(f4->inv(0), DomainError);
  CHECK(Fq::make(7)->from_int(-1) == 6);
  CHECK(prime_power_split(27) == std::pair<std::uint32_t, std::uint32_t>{3, 3});
  CHECK(prime_power_split(12) == std::pair<std::uint32_t, std::uint32_t>{0, 0});
}

TEST_CASE("field axioms for small q") {
  for (std::uint32_t q : {2u, 3u, 4u, 5u, 8u, 9u, 16u, 25u, 27u}) {
    auto F = Fq::make(q);
    for (std::uint32_t a = 0; a < q; ++a) {
      CHECK(F->add(a, F->neg(a)) == 0);
      for (std::uint32_t b = 0; b < q; ++b) {
        CHECK(F->mul(a, b) == F->mul(b, a));
        for (std::uint32_t c = 0; c < q; c += 3) {
          REQUIRE(F->mul(a, F->add(b, c)) == F->add(F->mul(a, b), F->mul(a, c)));
        }
      }
    }
  }
}

TEST_CASE("fqpoly arithmetic examples") {
  FqtRing A(2);
  CHECK(A.gcd(P(A, "t^2+t"), P(A, "t")) == P(A, "t"));
  auto [quot, rem] = A.divrem(P(A, "t^3"), P(A, "t+1"));
  CHECK(quot == P(A, "t^2+t+1"));
  CHECK(rem == P(A, "1"));
  CHECK(A.mul(P(A, "t+1"), P(A, "t+1")) == P(A, "t^2+1"));
  CHECK_THROWS_AS(A.divrem(P(A, "t"), A.zero()), DomainError);
  CHECK(A.render(P(A, "t^3 + t + 1")) == "t^3+t+1");
  FqtRing A3(3);
  CHECK(A3.render(P(A3, "t^3+2*t+1")) == "t^3+2*t+1");
  FqtRing A4(4);
  CHECK(A4.render(P(A4, "[0,1]*t + [1,1]")) == "[0,1]*t+[1,1]");
  CHECK_THROWS_AS(P(A, "s+1"), ParseError);
}

TEST_CASE("t derivative") {
  FqtRing A(2);
  CHECK(A.derivative(P(A, "t^3+t^2")) == P(A, "t^2"));
  FqtRing A5(5);
  CHECK(A5.derivative(P(A5, "t^5")).is_zero());
  CHECK(A5.derivative(P(A5, "3")).is_zero());
}

TEST_CASE("is_squarefree_A examples") {
  FqtRing A(2);
  CHECK(A.is_squarefree(P(A, "t^2+t")));
  CHECK_FALSE(A.is_squarefree(P(A, "t^3+t^2")));
  CHECK(A.is_squarefree(P(A, "1")));
  CHECK_THROWS_AS(A.is_squarefree(A.zero()), DomainError);
}

TEST_CASE("is_squarefree_A agrees with brute force up to degree 8") {
  for (std::uint32_t q : {2u, 3u}) {
    FqtRing A(q);
    std::uint64_t limit = 1;
    for (int i = 0; i <= 8; ++i) limit *= q;
    const std::uint64_t step = q == 2 ? 1 : 7;
    for (std::uint64_t idx = 1; idx < limit; idx += step) {
      FqPoly a = A.from_index(idx);
      REQUIRE(A.is_squarefree(a) == oracle_squarefree(A, a));
    }
  }
}

TEST_CASE("squarefree count (q-1)(q^D+1)") {
  for (std::uint32_t q : {2u, 3u}) {
    FqtRing A(q);
    for (unsigned D = 1; D <= 10; ++D) {
      std::uint64_t limit = 1;
      for (unsigned i = 0; i <= D; ++i) limit *= q;
      if (limit > 200000) break;
      std::uint64_t count = 0;
      for (std::uint64_t idx = 1; idx < limit; ++idx) count += A.is_squarefree(A.from_index(idx));
      std::uint64_t qD = limit / q;
      CHECK(count == (q - 1) * (qD + 1));
    }
  }
}

TEST_CASE("norm multiplicativity") {
  FqtRing A(3);
  for (std::uint64_t i = 1; i < 200; i += 7) {
    for (std::uint64_t j = 1; j < 200; j += 11) {
      auto a = A.from_index(i), b = A.from_index(j);
      CHECK(A.norm(A.mul(a, b)) == A.norm(a) * A.norm(b));
    }
  }
  CHECK(A.norm(A.zero()) == 0);
}

TEST_CASE("irreducibles_of_degree") {
  FqtRing A(2);
  auto d1 = irreducibles_of_degree(A, 1);
  REQUIRE(d1.size() == 2);
  CHECK(d1[0].pi() == P(A, "t"));
  CHECK(d1[1].pi() == P(A, "t+1"));
  auto d2 = irreducibles_of_degree(A, 2);
  REQUIRE(d2.size() == 1);
  CHECK(d2[0].pi() == P(A, "t^2+t+1"));
  CHECK(irreducibles_of_degree(A, 4).size() == 3);
  for (std::uint32_t q : {2u, 3u, 4u, 5u}) {
    FqtRing B(q);
    for (unsigned d = 1; d <= 6; ++d) {
      if (Int(q) * q * q * q * q * q > 20000 && d == 6) continue;
      auto irr = irreducibles_of_degree(B, d);
      CHECK(Int(static_cast<unsigned long>(irr.size())) == necklace_count(q, d));
    }
  }
  CHECK_THROWS_AS(irreducibles_of_degree(A, 40, 1000), BudgetError);
}

TEST_CASE("Rabin test against trial division") {
  for (std::uint32_t q : {2u, 3u, 4u}) {
    FqtRing A(q);
    for (std::uint64_t idx = q; idx < 6000; ++idx) {
      FqPoly a = A.from_index(idx);
      if (a.lead() != 1) continue;
      REQUIRE(A.is_irreducible(a) == oracle_irreducible(A, a));
    }
  }
}

TEST_CASE("PrimeA validation") {
  FqtRing A(2);
  CHECK(PrimeA(A, P(A, "t^2+t+1")).norm() == 4);
  CHECK_THROWS_AS(PrimeA(A, P(A, "t^2+1")), DomainError);
  FqtRing A3(3);
  CHECK_THROWS_AS(PrimeA(A3, P(A3, "2*t+1")), DomainError);
}

TEST_CASE("residue enumeration") {
  FqtRing A(2);
  ResidueEnumerator e1(A, PrimeA(A, P(A, "t")), 2, 1);
  CHECK(e1.size() == 4);
  std::vector<FqPoly> seen;
  e1.for_each([&](const std::vector<FqPoly>& r) { seen.push_back(r[0]); });
  CHECK(seen == std::vector<FqPoly>{P(A, "0"), P(A, "1"), P(A, "t"), P(A, "t+1")});

  ResidueEnumerator e2(A, PrimeA(A, P(A, "t^2+t+1")), 1, 1);
  CHECK(e2.size() == 4);

  FqtRing A5(5);
  ResidueEnumerator e3(A5, PrimeA(A5, P(A5, "t")), 2, 2);
  CHECK(e3.size() == 625);

  // pi-adic digits: r0 + pi*r1 covers every class mod pi^2 once.
  ResidueEnumerator e4(A, PrimeA(A, P(A, "t^2+t+1")), 2, 1);
  std::vector<FqPoly> classes;
  const FqPoly m = A.pow(P(A, "t^2+t+1"), 2);
  e4.for_each([&](const std::vector<FqPoly>& r) { classes.push_back(A.rem(r[0], m)); });
  std::sort(classes.begin(), classes.end());
  CHECK(std::adjacent_find(classes.begin(), classes.end()) == classes.end());
  CHECK(classes.size() == 16);

  CHECK_THROWS_AS(ResidueEnumerator(A5, PrimeA(A5, P(A5, "t")), 2, 20, 1000000), BudgetError);
}
