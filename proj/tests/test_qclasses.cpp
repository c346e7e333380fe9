#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

#include "doctest.h"
#include "sqdense/qclasses.hpp"
#include "sqdense/rng.hpp"
#include "sqdense/upoly.hpp"

using namespace sqd;

namespace {

// Signed squarefree kernel by naive trial division.
long long naive_kernel(long long v) {
  if (v == 0) return 0;
  long long sign = v < 0 ? -1 : 1, m = v < 0 ? -v : v, k = 1;
  for (long long p = 2; p * p <= m; ++p) {
    int e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    if (e % 2) k *= p;
  }
  return sign * k * m;
}

ZPoly random_factor(Xoshiro256& rng, unsigned deg) {
  ZPoly f(IntegerRing{}, {"x"});
  for (unsigned i = 0; i <= deg; ++i) f.add_term({i}, Int(static_cast<long>(rng.below(9)) - 4));
  if (f.degree_in(0) < deg) f.add_term({deg}, 1);
  return f;
}

}  // namespace

TEST_CASE("squarefree_decompose examples") {
  auto d = squarefree_decompose(parse_zpoly("x^3 + 2*x^2 + x"));
  CHECK(d.c == 1);
  CHECK(render(d.g) == "x + 1");
  CHECK(render(d.h) == "x");

  d = squarefree_decompose(parse_zpoly("4*x^3 + 4*x^2"));
  CHECK(d.c == 4);
  CHECK(render(d.g) == "x");
  CHECK(render(d.h) == "x + 1");

  d = squarefree_decompose(parse_zpoly("7"));
  CHECK(d.c == 7);
  CHECK(render(d.g) == "1");
  CHECK(render(d.h) == "1");

  d = squarefree_decompose(parse_zpoly("-2*x^5 + 2*x"));
  CHECK(d.c == -2);
  CHECK(render(d.h) == "x^5 - x");

  CHECK_THROWS_AS(squarefree_decompose(parse_zpoly("0")), DomainError);
  CHECK_THROWS_AS(squarefree_decompose(parse_zpoly("x*y")), DomainError);
}

TEST_CASE("squarefree_decompose reconstructs f") {
  Xoshiro256 rng(77);
  const UPolyOps<IntegerRing> ops{IntegerRing{}};
  for (int trial = 0; trial < 200; ++trial) {
    ZPoly f = ZPoly::constant(IntegerRing{}, {"x"}, Int(static_cast<long>(rng.below(13)) - 6));
    if (f.is_zero()) f = ZPoly::constant(IntegerRing{}, {"x"}, 1);
    unsigned deg = 0;
    while (deg < 8) {
      const unsigned fd = 1 + static_cast<unsigned>(rng.below(3));
      const unsigned mult = 1 + static_cast<unsigned>(rng.below(3));
      if (deg + fd * mult > 8) break;
      ZPoly g = random_factor(rng, fd);
      f = f * g.pow(mult);
      deg += fd * mult;
      if (rng.below(3) == 0) break;
    }
    const auto d = squarefree_decompose(f);
    CHECK_MESSAGE(ZPoly::constant(IntegerRing{}, {"x"}, d.c) * d.g * d.g * d.h == f, render(f));
    // h primitive, squarefree, positive leading coefficient; g primitive.
    UPoly<IntegerRing> h, g;
    for (unsigned i = 0; i <= d.h.degree_in(0); ++i) h.c.push_back(d.h.coefficient({i}));
    for (unsigned i = 0; i <= d.g.degree_in(0); ++i) g.c.push_back(d.g.coefficient({i}));
    CHECK(ops.content(h) == 1);
    CHECK(ops.content(g) == 1);
    CHECK(h.lead() > 0);
    CHECK(g.lead() > 0);
    if (h.degree() > 0) CHECK(ops.gcd(h, ops.derivative(h)).degree() == 0);
  }
}

TEST_CASE("delta_table examples and properties") {
  auto t = delta_table(4, 1);
  CHECK(t.delta[1] == 1);
  CHECK(t.witness[1] == 1u);
  CHECK(t.delta[0] == 0);
  CHECK(t.delta[2] == 0);
  CHECK(t.delta[3] == 0);
  CHECK_FALSE(t.witness[3].has_value());

  t = delta_table(1, 0);
  CHECK(t.delta[0] == 1);
  t = delta_table(2, 1);
  CHECK(t.delta[1] == 1);
  CHECK(t.delta[0] == 0);
  CHECK_THROWS_AS(delta_table(0, 1), DomainError);

  for (std::uint64_t a : {3u, 5u, 8u, 9u, 12u, 20u}) {
    for (long b = -3; b <= 7; ++b) {
      if (std::gcd(static_cast<long>(a), std::labs(b)) != 1) continue;
      t = delta_table(a, b);
      for (std::uint64_t r = 0; r < a; ++r) {
        if (!t.witness[r]) continue;
        const std::uint64_t m = *t.witness[r];
        CHECK(t.delta[r] == Rational(1, static_cast<long>(m * m)));
        CHECK(((static_cast<long>(m * m * r) - b) % static_cast<long>(a) + static_cast<long>(a)) % static_cast<long>(a) == 0);
        CHECK(std::gcd(r, a) == 1);
        for (std::uint64_t k = 1; k < m; ++k) {
          CHECK(((static_cast<long>(k * k * r) - b) % static_cast<long>(a) + static_cast<long>(a)) % static_cast<long>(a) != 0);
        }
      }
    }
  }
}

TEST_CASE("c_f_constant cases") {
  CHECK(c_f_constant(parse_zpoly("2*x^2")).value == 0);
  CHECK(c_f_constant(parse_zpoly("2*x^2")).deg_h == 0);
  CHECK(c_f_constant(parse_zpoly("x^2 + 1")).value == 1);
  const auto c = c_f_constant(parse_zpoly("4*x + 1"));
  CHECK(c.deg_h == 1);
  CHECK(c.over_pi_squared == 8);
  CHECK(c.value == doctest::Approx(0.81057).epsilon(1e-5));
  // h = x: a = 1, delta_0 = 1, c_f = 6/pi^2.
  const auto x = c_f_constant(parse_zpoly("3*x^3"));
  CHECK(x.over_pi_squared == 6);
  CHECK(x.value == doctest::Approx(6 / (std::numbers::pi * std::numbers::pi)));
}

TEST_CASE("image_count examples") {
  CHECK(image_count(parse_zpoly("x"), 100).distinct == 61);
  CHECK(image_count(parse_zpoly("x^2"), 100).distinct == 1);
  CHECK(image_count(parse_zpoly("x*(x - 1)"), 1).distinct == 1);
  const auto curve = image_count(parse_zpoly("x"), 100, 25);
  REQUIRE(curve.per_prefix.size() == 4);
  CHECK(curve.per_prefix[0].bound == 25);
  CHECK(curve.per_prefix[3].distinct == 61);
  CHECK(curve.per_prefix[0].distinct == 16);
}

TEST_CASE("image_count agrees with naive kernels") {
  Xoshiro256 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const ZPoly f = random_factor(rng, 1 + static_cast<unsigned>(rng.below(3)));
    const std::uint64_t B = 300;
    std::set<long long> classes;
    for (long n = 1; n <= static_cast<long>(B); ++n) classes.insert(naive_kernel(f.evaluate({Int(n)}).get_si()));
    CHECK_MESSAGE(image_count(f, B).distinct == classes.size(), render(f));
  }
  // Values beyond 62 bits take the exact path.
  const ZPoly big = parse_zpoly("x^5 + 1000000000000*x + 3");
  std::set<Int> classes;
  for (long n = 1; n <= 200; ++n) classes.insert(squarefree_split(big.evaluate({Int(n)})).kernel);
  CHECK(image_count(big, 200).distinct == classes.size());
}

TEST_CASE("collision_count") {
  const auto f = parse_zpoly("x^2 + 1");
  CHECK(collision_count(f, Rational(2), 100) == 3);
  CHECK(collision_count(f, Rational(-1), 100) == 0);
  CHECK(collision_count(f, Rational(1, 2), 100) == 3);
  double prev = 1;
  for (std::uint64_t B : {100u, 1000u, 10000u}) {
    const double r = static_cast<double>(collision_count(f, Rational(2), B)) / static_cast<double>(B);
    CHECK(r < prev);
    prev = r;
  }
  CHECK_THROWS_AS(collision_count(parse_zpoly("x + 1"), Rational(2), 10), PreconditionError);
  CHECK_THROWS_AS(collision_count(parse_zpoly("x^2*(x + 1)"), Rational(2), 10), PreconditionError);
  CHECK_THROWS_AS(collision_count(f, Rational(1), 10), DomainError);
  CHECK_THROWS_AS(collision_count(f, Rational(0), 10), DomainError);
}
