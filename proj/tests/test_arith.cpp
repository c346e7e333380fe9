#include <random>

#include "doctest.h"
#include "sqdense/arith.hpp"
#include "sqdense/error.hpp"
#include "sqdense/rng.hpp"

using namespace sqd;

namespace {

// Independent oracle: plain trial division over all d <= sqrt(n).
std::vector<std::uint64_t> oracle_primes(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 2; n <= limit; ++n) {
    bool prime = true;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
      if (n % d == 0) {
        prime = false;
        break;
      }
    }
    if (prime) out.push_back(n);
  }
  return out;
}

bool oracle_squarefree(std::int64_t n) {
  if (n == 0) return false;
  std::uint64_t m = n < 0 ? static_cast<std::uint64_t>(-n) : static_cast<std::uint64_t>(n);
  for (std::uint64_t d = 2; d * d <= m; ++d) {
    if (m % (d * d) == 0) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("primes_up_to") {
  CHECK(primes_up_to(10) == std::vector<std::uint64_t>{2, 3, 5, 7});
  CHECK(primes_up_to(2) == std::vector<std::uint64_t>{2});
  auto p100 = primes_up_to(100);
  CHECK(p100.size() == 25);
  CHECK(p100.back() == 97);
  CHECK(primes_up_to(5000) == oracle_primes(5000));
  CHECK_THROWS_AS(primes_up_to(1), DomainError);
  CHECK_THROWS_AS(primes_up_to(kSieveLimitMax + 1), BudgetError);
  CHECK(small_primes().size() == 78498);
}

TEST_CASE("factorize examples") {
  auto one = factorize(1);
  CHECK(one.sign == 1);
  CHECK(one.prime_powers.empty());

  auto twelve = factorize(12);
  CHECK(twelve.sign == 1);
  REQUIRE(twelve.prime_powers.size() == 2);
  CHECK(twelve.prime_powers[0] == PrimePower{2, 2});
  CHECK(twelve.prime_powers[1] == PrimePower{3, 1});

  auto m97 = factorize(-97);
  CHECK(m97.sign == -1);
  REQUIRE(m97.prime_powers.size() == 1);
  CHECK(m97.prime_powers[0] == PrimePower{97, 1});

  CHECK_THROWS_AS(factorize(0), DomainError);
}

TEST_CASE("factorize large composites") {
  // Products of two primes above the trial-division bound.
  const Int p("1000000007"), q("998244353"), r("18446744073709551557");
  auto f = factorize(p * q * q * r);
  REQUIRE(f.prime_powers.size() == 3);
  CHECK(f.prime_powers[0] == PrimePower{q, 2});
  CHECK(f.prime_powers[1] == PrimePower{p, 1});
  CHECK(f.prime_powers[2] == PrimePower{r, 1});
  CHECK(f.product() == p * q * q * r);
}

TEST_CASE("factorize round trip on random 63-bit integers") {
  Xoshiro256 rng(7);
  for (int i = 0; i < 10000; ++i) {
    const std::uint64_t v = rng() >> 1;
    if (v == 0) continue;
    Int n;
    mpz_import(n.get_mpz_t(), 1, -1, sizeof v, 0, 0, &v);
    if (i % 2) n = -n;
    auto f = factorize(n);
    CHECK(f.product() == n);
    for (std::size_t k = 0; k < f.prime_powers.size(); ++k) {
      CHECK(f.prime_powers[k].exponent >= 1);
      CHECK(is_probable_prime(f.prime_powers[k].prime));
      if (k) CHECK(f.prime_powers[k - 1].prime < f.prime_powers[k].prime);
    }
  }
}

TEST_CASE("squarefree_split examples") {
  auto a = squarefree_split(12);
  CHECK(a.kernel == 3);
  CHECK(a.root == 2);
  auto b = squarefree_split(-18);
  CHECK(b.kernel == -2);
  CHECK(b.root == 3);
  CHECK_THROWS_AS(squarefree_split(0), DomainError);
}

TEST_CASE("squarefree_split property on [-1e5, 1e5]") {
  for (std::int64_t n = -100000; n <= 100000; ++n) {
    if (n == 0) continue;
    auto s = squarefree_split(Int(static_cast<long>(n)));
    REQUIRE(s.kernel * s.root * s.root == n);
    REQUIRE(is_squarefree(s.kernel));
    REQUIRE(s.root > 0);
  }
}

TEST_CASE("squarefree_split on large values") {
  const Int p("1000000007"), q("998244353");
  auto s = squarefree_split(-Int(6) * p * p * q);
  CHECK(s.kernel == -6 * q);
  CHECK(s.root == p);
  for (std::uint64_t n : {std::uint64_t{1}, std::uint64_t{4}, std::uint64_t{999999999999999989ULL},
                         
                          std::uint64_t{1000003ULL * 1000003ULL * 7ULL}}) {
    auto [k, r] = squarefree_split_u64(n);
    CHECK(k * r * r == n);
    CHECK(is_squarefree_u64(k));
  }
}

TEST_CASE("is_squarefree") {
  CHECK(is_squarefree(10));
  CHECK_FALSE(is_squarefree(0));
  CHECK_FALSE(is_squarefree(-4));
  CHECK(is_squarefree(1));
  CHECK(is_squarefree(-1));
  for (std::int64_t n = -3000; n <= 3000; ++n) {
    REQUIRE(is_squarefree(Int(static_cast<long>(n))) == oracle_squarefree(n));
  }
}

TEST_CASE("squarefree count up to 1e6") {
  // Sieve oracle: strike multiples of p^2.
  const std::uint64_t B = 1000000;
  std::vector<bool> sf(B + 1, true);
  for (std::uint64_t d = 2; d * d <= B; ++d) {
    for (std::uint64_t m = d * d; m <= B; m += d * d) sf[m] = false;
  }
  std::uint64_t oracle = 0, via_split = 0;
  for (std::uint64_t n = 1; n <= B; ++n) {
    oracle += sf[n];
    via_split += squarefree_split_u64(n).second == 1;
  }
  CHECK(oracle == 607926);
  CHECK(via_split == 607926);
  CHECK(static_cast<double>(via_split) / B == doctest::Approx(6.0 / (M_PI * M_PI)).epsilon(1e-3));
}

TEST_CASE("primality and helpers") {
  CHECK(is_prime_u64(2));
  CHECK_FALSE(is_prime_u64(1));
  CHECK_FALSE(is_prime_u64(3215031751ULL));
  CHECK(is_prime_u64(18446744073709551557ULL));
  CHECK_FALSE(is_probable_prime(Int("3317044064679887385961981")));
  CHECK(is_probable_prime(Int("170141183460469231731687303715884105727")));
  CHECK(isqrt_u64(~std::uint64_t{0}) == 4294967295ULL);
  CHECK(isqrt_u64(99) == 9);
  CHECK(moebius(1) == 1);
  CHECK(moebius(6) == 1);
  CHECK(moebius(12) == 0);
  CHECK(moebius(30) == -1);
  const Int n = Int("1000000007") * Int("1000000009");
  const Int d = pollard_brent(n);
  CHECK((d == Int("1000000007") || d == Int("1000000009")));
}
