#include "doctest.h"
#include "sqdense/localcount.hpp"
#include "sqdense/rng.hpp"

using namespace sqd;

namespace {

// Oracle independent of the library's enumerators: exact evaluation in Z at
// every point of [0, m)^n followed by a divisibility test.
std::uint64_t oracle_count(const ZPoly& f, std::uint64_t m) {
  const std::size_t n = f.arity();
  std::vector<Int> x(n, 0);
  std::uint64_t count = 0;
  for (;;) {
    count += f.evaluate(x) % Int(static_cast<unsigned long>(m)) == 0;
    std::size_t i = 0;
    for (; i < n; ++i) {
      if (x[i] + 1 < static_cast<unsigned long>(m)) {
        x[i] += 1;
        break;
      }
      x[i] = 0;
    }
    if (i == n) return count;
  }
}

ZPoly random_poly(Xoshiro256& rng, std::size_t n, unsigned deg) {
  std::vector<std::string> vars;
  for (std::size_t i = 0; i < n; ++i) vars.push_back("x" + std::to_string(i + 1));
  ZPoly f(IntegerRing{}, vars);
  const unsigned terms = 1 + static_cast<unsigned>(rng.below(5));
  for (unsigned k = 0; k < terms; ++k) {
    Exponents e(n, 0);
    unsigned budget = static_cast<unsigned>(rng.below(deg + 1));
    for (unsigned j = 0; j < budget; ++j) e[rng.below(n)] += 1;
    f.add_term(e, Int(static_cast<long>(rng.below(31)) - 15));
  }
  return f;
}

}  // namespace

TEST_CASE("roots_mod_p") {
  CHECK(roots_mod_p({1, 0, 1}, 5) == std::vector<std::uint64_t>{2, 3});
  CHECK(roots_mod_p({1, 0, 1}, 7).empty());
  // (x-3)(x-10)(x-500) mod 1009, above the brute-force threshold.
  const std::uint64_t p = 1009;
  std::vector<std::uint64_t> f{1};
  for (std::uint64_t r : {3, 10, 500}) {
    std::vector<std::uint64_t> g(f.size() + 1, 0);
    for (std::size_t i = 0; i < f.size(); ++i) {
      g[i + 1] = (g[i + 1] + f[i]) % p;
      g[i] = (g[i] + f[i] * (p - r)) % p;
    }
    f = g;
  }
  f[0] = (f[0] + 0) % p;
  CHECK(roots_mod_p(f, p) == std::vector<std::uint64_t>{3, 10, 500});
  // Squared factor and an irreducible quadratic factor.
  CHECK(roots_mod_p({4, 0, 1}, 1019).empty());
  CHECK(roots_mod_p({4, 0, 1}, 1009).size() == 2);
  CHECK_THROWS_AS(roots_mod_p({0, 0}, 7), DomainError);
}

TEST_CASE("count_zeros_brute examples") {
  CHECK(count_zeros_brute(parse_zpoly("x"), 7, 2).count == 1);
  CHECK(count_zeros_brute(parse_zpoly("x^2"), 3, 2).count == 3);
  CHECK(count_zeros_brute(parse_zpoly("x^2+1"), 5, 2).count == 2);
  CHECK_THROWS_AS(count_zeros_brute(parse_zpoly("x*y*z"), 101, 2, 1000000), BudgetError);
  CHECK_THROWS_AS(count_zeros_brute(parse_zpoly("x"), 8, 2), DomainError);
}

TEST_CASE("count_zeros_hensel examples") {
  auto a = count_zeros_hensel(parse_zpoly("x^2"), 3);
  CHECK(a.count == 3);
  CHECK(a.singular_zeros == 1);
  CHECK(a.singular_lifting == 1);
  auto b = count_zeros_hensel(parse_zpoly("x^2+1"), 5);
  CHECK(b.count == 2);
  CHECK(b.smooth_zeros == 2);
  CHECK(b.method == CountMethod::hensel);

  FqtRing A5(5);
  auto disc = parse_apoly("4*(4*a^3 + 27*b^2)", A5, {"a", "b"});
  PrimeA t(A5, A5.t());
  auto h = count_zeros_hensel(disc, t);
  CHECK(h.count == 45);
  CHECK(h.smooth_zeros == 4);
  CHECK(h.singular_zeros == 1);
  CHECK(h.singular_lifting == 1);
  CHECK(count_zeros_brute(disc, t, 2).count == 45);
}

TEST_CASE("brute counts agree with the exact-evaluation oracle") {
  Xoshiro256 rng(3);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = 1 + rng.below(2);
    auto f = random_poly(rng, n, 4);
    for (std::uint64_t p : {2, 3, 5}) {
      CHECK(count_zeros_brute(f, p, 2).count == oracle_count(f, p * p));
      CHECK(count_zeros_brute(f, p, 1).count == oracle_count(f, p));
    }
  }
}

TEST_CASE("Hensel equals brute over Z") {
  Xoshiro256 rng(4);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 1 + rng.below(2);
    auto f = random_poly(rng, n, 4);
    if (trial % 3 == 0) f = f * f;  // plenty of singular zeros
    if (trial % 5 == 0) f = f.scale(Int(9));
    for (std::uint64_t p : {2, 3, 5, 7, 11, 13}) {
      auto brute = count_zeros_brute(f, p, 2);
      auto hensel = count_zeros_hensel(f, p);
      REQUIRE(brute.count == hensel.count);
      // Lift counting bound.
      Int pn;
      mpz_ui_pow_ui(pn.get_mpz_t(), p, n);
      CHECK(brute.count <= count_zeros_brute(f, p, 1).count * pn);
    }
  }
}

TEST_CASE("Hensel equals brute over F_q[t]") {
  Xoshiro256 rng(5);
  for (std::uint32_t q : {2u, 3u}) {
    FqtRing A(q);
    std::vector<PrimeA> primes;
    for (unsigned d = 1; d <= 2; ++d) {
      for (auto& p : irreducibles_of_degree(A, d)) primes.push_back(p);
    }
    for (int trial = 0; trial < 8; ++trial) {
      const std::size_t n = 1 + rng.below(2);
      std::vector<std::string> vars;
      for (std::size_t i = 0; i < n; ++i) vars.push_back("x" + std::to_string(i + 1));
      APoly f(A, vars);
      for (int k = 0; k < 4; ++k) {
        Exponents e(n, 0);
        for (unsigned j = 0; j < rng.below(4); ++j) e[rng.below(n)] += 1;
        f.add_term(e, A.from_index(rng.below(q * q * q)));
      }
      if (trial % 3 == 1) f = f * f;
      for (const auto& pi : primes) {
        REQUIRE(count_zeros_hensel(f, pi).count == count_zeros_brute(f, pi, 2).count);
      }
    }
  }
}

TEST_CASE("Hensel over A in the inseparable case") {
  FqtRing A2(2);
  auto F = restrict_scalars(parse_apoly("x + t", A2), {"x"});
  for (const auto& pi : irreducibles_of_degree(A2, 2)) {
    auto h = count_zeros_hensel(F, pi);
    CHECK(h.smooth_zeros == 0);
    CHECK(h.count == count_zeros_brute(F, pi, 2).count);
  }
}

TEST_CASE("count_common_zeros examples") {
  for (std::uint64_t p : {2, 3, 5, 101}) {
    CHECK(count_common_zeros(parse_zpoly("x", {"x", "y"}), parse_zpoly("y", {"x", "y"}), p).count == 1);
  }
  auto f = parse_zpoly("x+y"), g = parse_zpoly("x-y");
  CHECK(count_common_zeros(f, g, 2).count == 2);
  CHECK(count_common_zeros(f, g, 5).count == 1);
  CHECK(count_common_zeros(parse_zpoly("x^2+y^2"), parse_zpoly("x*y", {"x", "y"}), 7).count == 1);
  CHECK(count_common_zeros(parse_zpoly("x*(y+1)"), parse_zpoly("x*y+x", {"x", "y"}), 5).count == 9);
  FqtRing A3(3);
  PrimeA t(A3, A3.t());
  CHECK(count_common_zeros(parse_apoly("x+y", A3), parse_apoly("x-y", A3), t).count == 1);
}

TEST_CASE("restrict_scalars examples") {
  FqtRing A2(2);
  auto x = parse_apoly("x", A2);
  auto F = restrict_scalars(x, {"x"});
  CHECK(F == parse_apoly("x_0^2 + t*x_1^2", A2, {"x_0", "x_1"}));
  auto F2 = restrict_scalars(parse_apoly("x + t^2 + 1", A2), {"x"});
  CHECK(F2 == parse_apoly("x_0^2 + t*x_1^2 + t^2 + 1", A2, {"x_0", "x_1"}));
  auto F3 = restrict_scalars(parse_apoly("x*z", A2), {"x"});
  CHECK(F3.variables() == std::vector<std::string>{"x_0", "x_1", "z"});
  CHECK(F3 == parse_apoly("(x_0^2 + t*x_1^2)*z", A2, {"x_0", "x_1", "z"}));
  CHECK_THROWS_AS(restrict_scalars(x, {"w"}), DomainError);
  // Every element of A of degree < 4 is hit exactly once by a_0^2 + t a_1^2 with deg a_j < 2.
  std::vector<int> hits(16, 0);
  for (std::uint64_t a0 = 0; a0 < 4; ++a0) {
    for (std::uint64_t a1 = 0; a1 < 4; ++a1) {
      auto v = F.evaluate({A2.from_index(a0), A2.from_index(a1)});
      hits[A2.index_of(v)] += 1;
    }
  }
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
}

TEST_CASE("derivative_criterion examples") {
  FqtRing A2(2);
  auto F = parse_apoly("y0^2 + t*y1^2", A2);
  PrimeA t(A2, A2.t());
  CHECK(derivative_criterion(F, t, std::vector<FqPoly>{A2.zero(), A2.zero()}) == CriterionResult{true, true});
  CHECK(derivative_criterion(F, t, std::vector<FqPoly>{A2.one(), A2.zero()}) == CriterionResult{false, false});
  PrimeA t1(A2, A2.parse("t+1"));
  CHECK(derivative_criterion(F, t1, std::vector<FqPoly>{A2.t(), A2.one()}) == CriterionResult{false, false});
  CHECK_THROWS_AS(derivative_criterion(parse_apoly("y^2 + y", A2), t, std::vector<FqPoly>{A2.one()}),
                  PreconditionError);
}

TEST_CASE("derivative_criterion_box matches per-point evaluation") {
  Xoshiro256 rng(9);
  for (std::uint32_t q : {2u, 3u}) {
    FqtRing A(q);
    for (int trial = 0; trial < 3; ++trial) {
      APoly f(A, {"x"});
      for (unsigned k = 0; k <= 2; ++k) f.add_term({k}, A.from_index(rng.below(q * q)));
      auto F = restrict_scalars(f, {"x"});
      for (const auto& pi : irreducibles_of_degree(A, 1)) {
        auto report = derivative_criterion_box(F, pi, 3);
        CHECK(report.agreements == report.points);
        CHECK_FALSE(report.first_mismatch.has_value());
        // Recount the squares with the exact per-point routine on the same box.
        std::uint64_t L = 1;
        for (int i = 0; i < 3 * pi.degree(); ++i) L *= q;
        std::uint64_t squares = 0, points = 0;
        std::vector<std::uint64_t> idx(F.arity(), 0);
        for (;;) {
          std::vector<FqPoly> pt;
          for (auto i : idx) pt.push_back(A.from_index(i));
          auto r = derivative_criterion(F, pi, pt);
          CHECK(r.via_square == r.via_pair);
          squares += r.via_square;
          ++points;
          std::size_t i = 0;
          for (; i < idx.size(); ++i) {
            if (++idx[i] < L) break;
            idx[i] = 0;
          }
          if (i == idx.size()) break;
        }
        CHECK(points == report.points);
        CHECK(squares == report.square_divisible);
      }
    }
  }
}

TEST_CASE("squarefree univariate c_p bounded by degree") {
  auto f = parse_zpoly("x^3 - x + 1");  // discriminant -23
  for (std::uint64_t p : primes_up_to(400)) {
    if (p == 23) continue;
    CHECK(count_zeros_hensel(f, p).count <= 3);
  }
}

TEST_CASE("Hensel over Z for primes with p^2 beyond 32 bits") {
  const std::uint64_t p = 65537;
  CHECK(count_zeros_hensel(parse_zpoly("x^2"), p).count == Int(65537));
  CHECK(count_zeros_hensel(parse_zpoly("x^2 + 65537"), p).count == 0);
  CHECK(count_zeros_hensel(parse_zpoly("x^2 + 4295098369"), p).count == Int(65537));
  // Smooth zeros: x^2 - 4 has roots +-2, each lifting to p^(n-1) = 1 zero.
  CHECK(count_zeros_hensel(parse_zpoly("x^2 - 4"), p).count == 2);
  // Two variables: (x - y)^2 is singular on the diagonal; each of those p zeros lifts to p^2.
  auto h = count_zeros_hensel(parse_zpoly("(x - y)^2"), 70001);
  CHECK(h.singular_zeros == 70001);
  CHECK(h.count == Int(70001) * 70001 * 70001);
}
