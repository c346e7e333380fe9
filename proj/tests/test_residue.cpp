#include "doctest.h"
#include "sqdense/residue.hpp"

using namespace sqd;

TEST_CASE("A residue rings agree with polynomial arithmetic") {
  struct Case {
    std::uint32_t q;
    const char* modulus;
  };
  // Table rings, log/exp fields, XOR addition and the digit fallback.
  for (const Case& c : {Case{2, "t^2+t+1"}, Case{3, "t^4+2*t^2+1"}, Case{5, "t^2+2"}, Case{4, "t^3+t+1"},
                        Case{2, "t^12+t^3+1"}, Case{3, "t^8+t^4+2*t^3+t+1"}, Case{2, "t^13+t^4+t^3+t+1"},
                        Case{5, "t^5"}, Case{7, "t^4+t+3"}}) {
    FqtRing A(c.q);
    const FqPoly m = A.parse(c.modulus);
    AResidueRing R(A, m);
    CHECK(R.is_field() == A.is_irreducible(m));
    const std::uint32_t N = R.size();
    const std::uint32_t step = N > 4000 ? N / 97 + 1 : 1;
    const std::uint32_t step2 = N > 60 ? N / 53 + 1 : 1;
    for (std::uint32_t a = 0; a < N; a += step) {
      const FqPoly pa = R.to_poly(a);
      CHECK(R.from_poly(pa) == a);
      CHECK(R.add(a, R.neg(a)) == 0);
      for (std::uint32_t b = 0; b < N; b += step2) {
        const FqPoly pb = R.to_poly(b);
        REQUIRE(R.add(a, b) == R.from_poly(A.add(pa, pb)));
        REQUIRE(R.mul(a, b) == R.from_poly(A.mul(pa, pb)));
        REQUIRE(R.sub(a, b) == R.from_poly(A.sub(pa, pb)));
      }
    }
  }
}

TEST_CASE("Z/m ring and compiled evaluation") {
  ZmodRing R(25);
  CHECK(R.from_int(Int(-1)) == 24);
  CHECK(R.mul(7, 7) == 24);
  auto f = parse_zpoly("3*x^2*y - 7*y^3 + 11");
  auto cf = compile(f, R);
  for (std::uint64_t x = 0; x < 25; x += 3) {
    for (std::uint64_t y = 0; y < 25; y += 4) {
      std::uint64_t pt[2] = {x, y};
      Int exact = f.evaluate({Int(static_cast<unsigned long>(x)), Int(static_cast<unsigned long>(y))});
      CHECK(cf.evaluate(pt) == R.from_int(exact));
      std::vector<std::uint64_t> u;
      cf.coefficients_in(1, pt, u);
      std::uint64_t acc = 0;
      for (std::size_t k = u.size(); k-- > 0;) acc = R.add(R.mul(acc, y), u[k]);
      CHECK(acc == cf.evaluate(pt));
    }
  }
  CHECK_THROWS_AS(ZmodRing(1), DomainError);
}
