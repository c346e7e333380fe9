#include <cmath>

#include "doctest.h"
#include "sqdense/ecdisc.hpp"
#include "sqdense/localcount.hpp"

using namespace sqd;

namespace {

Rational frac(long a, long b) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

}  // namespace

TEST_CASE("discriminant_poly reduces -16(4A^3 + 27B^2)") {
  CHECK(render(discriminant_poly(5)) == "A^3 + 3*B^2");
  // -64 = 6 and -432 = 2 mod 7.
  CHECK(render(discriminant_poly(7)) == "6*A^3 + 2*B^2");
  CHECK(render(discriminant_poly(11)) == "2*A^3 + 8*B^2");
  CHECK_THROWS_AS(discriminant_poly(2), DomainError);
  CHECK_THROWS_AS(discriminant_poly(9), DomainError);
  CHECK_NOTHROW(discriminant_poly(25));
}

TEST_CASE("double-zero counts at t for q = 5") {
  const FqtRing ring(5);
  const PrimeA t(ring, ring.t());
  const APoly D = discriminant_poly(5);
  const auto brute = count_zeros_brute(D, t, 2);
  const auto hensel = count_zeros_hensel(D, t);
  CHECK(brute.count == 45);
  CHECK(hensel.count == 45);
  CHECK(hensel.smooth_zeros == 4);
  CHECK(hensel.singular_zeros == 1);
  CHECK(hensel.singular_lifting == 1);
  const auto local = local_double_zero_density(5, P1Point::at(t));
  CHECK(local.density == frac(45, 625));
  REQUIRE(local.count);
  CHECK(*local.count == 45);
}

TEST_CASE("double-zero counts match 2N^2 - N at every point of degree <= 2") {
  for (std::uint32_t q : {5u, 7u}) {
    const FqtRing ring(q);
    for (unsigned d = 1; d <= 2; ++d) {
      for (const auto& pi : irreducibles_of_degree(ring, d)) {
        const auto local = local_double_zero_density(q, P1Point::at(pi));
        const Int N = pi.norm();
        CHECK(local.count == 2 * N * N - N);
      }
    }
  }
  CHECK(local_double_zero_density(7, P1Point::at_infinity(7)).density == frac(91, 2401));
  CHECK_FALSE(local_double_zero_density(7, P1Point::at_infinity(7)).count.has_value());
}

TEST_CASE("gamma_q and rd_limit") {
  const auto g0 = gamma_q(7, 0);
  CHECK(g0.prefactor == frac(343, 288));
  CHECK(g0.product.factors.empty());
  CHECK(g0.value_double() == doctest::Approx(343.0 / 288));
  CHECK(rd_limit(5, 0).value_double() == doctest::Approx(1.25));

  const auto g1 = gamma_q(5, 1);
  CHECK(g1.prefactor == frac(125, 96));
  REQUIRE(g1.product.factors.size() == 2);
  CHECK(g1.product.factors[0].prime == "inf");
  CHECK(g1.product.factors[1].multiplicity == 5);
  const double x = 1 - 45.0 / 625;
  CHECK(g1.value_double() == doctest::Approx(125.0 / 96 * std::pow(x, 6)).epsilon(1e-14));

  double prev = 10;
  for (unsigned c = 0; c <= 5; ++c) {
    const auto g = gamma_q(5, c), r = rd_limit(5, c);
    CHECK(g.value_double() < prev);
    prev = g.value_double();
    CHECK(r.value_double() / g.value_double() == doctest::Approx(24.0 / 25).epsilon(1e-14));
    CHECK(g.product.tail_low <= 0);
  }
  CHECK_THROWS_AS(gamma_q(3, 2), DomainError);
}

TEST_CASE("empirical discriminant density") {
  BoxSpec s;
  const auto small = empirical_disc_density(5, 1, s);
  CHECK(small.total == 625);
  // A = B = 0 gives a zero discriminant.
  std::uint64_t oracle = 0;
  const FqtRing ring(5);
  const APoly D = discriminant_poly(5);
  for (std::uint64_t a = 0; a < 25; ++a) {
    for (std::uint64_t b = 0; b < 25; ++b) {
      const FqPoly v = D.evaluate({ring.from_index(a), ring.from_index(b)});
      oracle += !v.is_zero() && ring.is_squarefree(v);
    }
  }
  CHECK(small.hits == oracle);

  const auto exact = empirical_disc_density(5, 2, s);
  s.mode = SampleMode::monte_carlo;
  s.samples = 20000;
  s.seed = 1;
  const auto mc = empirical_disc_density(5, 2, s);
  CHECK(std::abs(mc.ratio - exact.ratio) <= mc.half_width);
}
