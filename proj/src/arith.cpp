#include "sqdense/arith.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>

#include "sqdense/error.hpp"

namespace sqd {

namespace {

constexpr std::uint64_t kTrialLimit = 1'000'000;

bool fits_u64(const Int& n) { return sgn(n) >= 0 && mpz_sizeinbase(n.get_mpz_t(), 2) <= 64; }

std::uint64_t to_u64(const Int& n) {
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, -1, sizeof out, 0, 0, n.get_mpz_t());
  return out;
}

Int from_u64(std::uint64_t v) {
  Int out;
  mpz_import(out.get_mpz_t(), 1, -1, sizeof v, 0, 0, &v);
  return out;
}

// Cycle-finding with Brent's schedule for x -> x^2 + c (mod n), c = 1, 2, ...
std::uint64_t brent_u64(std::uint64_t n) {
  if (n % 2 == 0) return 2;
  constexpr std::uint64_t kBatch = 128;
  for (std::uint64_t c = 1;; ++c) {
    auto step = [&](std::uint64_t v) {
      std::uint64_t s = mulmod_u64(v, v, n) + c;
      return s >= n ? s - n : s;
    };
    std::uint64_t y = 2, x = 2, ys = 2, q = 1, g = 1;
    for (std::uint64_t r = 1; g == 1; r <<= 1) {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = step(y);
      for (std::uint64_t k = 0; k < r && g == 1; k += kBatch) {
        ys = y;
        for (std::uint64_t i = 0; i < std::min(kBatch, r - k); ++i) {
          y = step(y);
          q = mulmod_u64(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
      }
    }
    if (g == n) {
      do {
        ys = step(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void split_u64(std::uint64_t n, std::map<Int, unsigned>& out) {
  if (n == 1) return;
  if (is_prime_u64(n)) {
    out[from_u64(n)] += 1;
    return;
  }
  const std::uint64_t d = brent_u64(n);
  split_u64(d, out);
  split_u64(n / d, out);
}

void split_mpz(const Int& n, std::map<Int, unsigned>& out) {
  if (n == 1) return;
  if (fits_u64(n)) {
    split_u64(to_u64(n), out);
    return;
  }
  if (is_probable_prime(n)) {
    out[n] += 1;
    return;
  }
  const Int d = pollard_brent(n);
  split_mpz(d, out);
  split_mpz(Int(n / d), out);
}

bool is_perfect_square_u64(std::uint64_t m, std::uint64_t& root) {
  root = isqrt_u64(m);
  return root * root == m;
}

}  // namespace

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod_u64(r, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1;
  }
  return r;
}

std::uint64_t isqrt_u64(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(__builtin_sqrtl(static_cast<long double>(n)));
  while (r > 0 && static_cast<unsigned __int128>(r) * r > n) --r;
  while (static_cast<unsigned __int128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
  if (limit < 2) throw DomainError("primes_up_to: limit must be >= 2");
  if (limit > kSieveLimitMax) {
    throw BudgetError("primes_up_to: limit " + std::to_string(limit) + " exceeds sieve budget " +
                      std::to_string(kSieveLimitMax));
  }
  // composite[i] describes the odd number 2i + 1.
  std::vector<bool> composite(limit / 2 + 1, false);
  for (std::uint64_t i = 1; (2 * i + 1) * (2 * i + 1) <= limit; ++i) {
    if (composite[i]) continue;
    const std::uint64_t p = 2 * i + 1;
    for (std::uint64_t j = p * p / 2; j < composite.size(); j += p) composite[j] = true;
  }
  std::vector<std::uint64_t> primes{2};
  for (std::uint64_t i = 1; 2 * i + 1 <= limit; ++i) {
    if (!composite[i]) primes.push_back(2 * i + 1);
  }
  return primes;
}

std::span<const std::uint64_t> small_primes() {
  static const std::vector<std::uint64_t> primes = primes_up_to(kTrialLimit);
  return primes;
}

namespace {

// Divisibility by an odd prime p without division: n is a multiple of p iff
// n * p^-1 (mod 2^64) <= floor((2^64 - 1) / p).
struct OddDivisor {
  std::uint64_t inverse;
  std::uint64_t limit;
  bool divides(std::uint64_t n) const noexcept { return n * inverse <= limit; }
};

const std::vector<OddDivisor>& odd_divisors() {
  static const std::vector<OddDivisor> table = [] {
    std::vector<OddDivisor> out;
    const auto primes = small_primes();
    for (std::size_t i = 1; i < primes.size(); ++i) {
      const std::uint64_t p = primes[i];
      std::uint64_t inv = p;  // Newton iteration doubles the correct low bits.
      for (int k = 0; k < 5; ++k) inv *= 2 - p * inv;
      out.push_back({inv, ~std::uint64_t{0} / p});
    }
    return out;
  }();
  return table;
}

// Strips primes below 10^6 from m (while p^2 <= m), recording them.
void trial_divide_u64(std::uint64_t& m, std::map<Int, unsigned>& found) {
  if (m % 2 == 0) {
    const int e = __builtin_ctzll(m);
    m >>= e;
    found[2] = static_cast<unsigned>(e);
  }
  const auto primes = small_primes();
  const auto& div = odd_divisors();
  for (std::size_t i = 0; i < div.size(); ++i) {
    const std::uint64_t p = primes[i + 1];
    if (p * p > m) break;
    if (!div[i].divides(m)) continue;
    unsigned e = 0;
    do {
      m /= p;
      ++e;
    } while (div[i].divides(m));
    found[Int(static_cast<unsigned long>(p))] = e;
  }
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  static constexpr std::uint64_t kBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (std::uint64_t p : kBases) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++s;
  }
  for (std::uint64_t a : kBases) {
    std::uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

bool is_probable_prime(const Int& n) {
  if (n < 2) return false;
  if (fits_u64(n)) return is_prime_u64(to_u64(n));
  // Bases 2..41 are a proven deterministic set below 3.3e24; beyond that the
  // same fixed set plus a few more keeps the answer reproducible.
  static constexpr unsigned kBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71};
  for (unsigned p : kBases) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return n == p;
  }
  const Int nm1 = n - 1;
  Int d = nm1;
  unsigned s = 0;
  while (mpz_even_p(d.get_mpz_t())) {
    d >>= 1;
    ++s;
  }
  Int x;
  for (unsigned a : kBases) {
    const Int base(a);
    mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == nm1) continue;
    bool witness = true;
    for (unsigned r = 1; r < s; ++r) {
      x = x * x % n;
      if (x == nm1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

Int pollard_brent(const Int& n) {
  if (n <= 3) throw DomainError("pollard_brent: n must be composite");
  if (mpz_even_p(n.get_mpz_t())) return 2;
  if (fits_u64(n)) return from_u64(brent_u64(to_u64(n)));
  constexpr unsigned long kBatch = 128;
  for (unsigned long c = 1;; ++c) {
    auto step = [&](const Int& v) -> Int { return (v * v + c) % n; };
    Int y = 2, x = 2, ys = 2, q = 1, g = 1;
    for (unsigned long r = 1; g == 1; r <<= 1) {
      x = y;
      for (unsigned long i = 0; i < r; ++i) y = step(y);
      for (unsigned long k = 0; k < r && g == 1; k += kBatch) {
        ys = y;
        for (unsigned long i = 0; i < std::min(kBatch, r - k); ++i) {
          y = step(y);
          q = q * abs(x - y) % n;
        }
        g = gcd(q, n);
      }
    }
    if (g == n) {
      do {
        ys = step(ys);
        g = gcd(Int(abs(x - ys)), n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

Int Factorization::product() const {
  Int out = sign;
  for (const auto& [p, e] : prime_powers) {
    Int pe;
    mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e);
    out *= pe;
  }
  return out;
}

Factorization factorize(const Int& n) {
  if (n == 0) throw DomainError("factorize: 0 has no factorization");
  Factorization out;
  out.sign = sgn(n) < 0 ? -1 : 1;
  Int rem = abs(n);
  std::map<Int, unsigned> found;
  if (fits_u64(rem)) {
    std::uint64_t m = to_u64(rem);
    trial_divide_u64(m, found);
    rem = from_u64(m);
  } else {
    for (std::uint64_t p : small_primes()) {
      if (rem == 1) break;
      if (mpz_cmp_ui(rem.get_mpz_t(), p * p) < 0) break;
      if (!mpz_divisible_ui_p(rem.get_mpz_t(), p)) continue;
      unsigned e = 0;
      do {
        mpz_divexact_ui(rem.get_mpz_t(), rem.get_mpz_t(), p);
        ++e;
      } while (mpz_divisible_ui_p(rem.get_mpz_t(), p));
      found[Int(static_cast<unsigned long>(p))] = e;
      if (fits_u64(rem)) {
        std::uint64_t m = to_u64(rem);
        trial_divide_u64(m, found);
        rem = from_u64(m);
        break;
      }
    }
  }
  if (rem != 1) {
    // Either rem < 10^12 with no factor below its square root, or large.
    const Int bound = Int(kTrialLimit) * kTrialLimit;
    if (rem < bound) {
      found[rem] += 1;
    } else {
      split_mpz(rem, found);
    }
  }
  for (auto& [p, e] : found) out.prime_powers.push_back({p, e});
  return out;
}

std::pair<std::uint64_t, std::uint64_t> squarefree_split_u64(std::uint64_t n) {
  if (n == 0) throw DomainError("squarefree_split: 0 has no squarefree kernel");
  std::uint64_t kernel = 1, root = 1, m = n;
  if (m % 2 == 0) {
    const int e = __builtin_ctzll(m);
    m >>= e;
    root <<= e / 2;
    if (e % 2) kernel = 2;
  }
  const auto primes = small_primes();
  const auto& div = odd_divisors();
  std::size_t i = 1;
  for (; i < primes.size(); ++i) {
    const std::uint64_t p = primes[i];
    if (static_cast<unsigned __int128>(p) * p * p > m) break;
    if (!div[i - 1].divides(m)) continue;
    unsigned e = 0;
    do {
      m /= p;
      ++e;
    } while (div[i - 1].divides(m));
    for (unsigned k = 0; k < e / 2; ++k) root *= p;
    if (e % 2) kernel *= p;
  }
  if (m == 1) return {kernel, root};
  if (i < primes.size()) {
    // Every prime factor of m exceeds its cube root: m is p, p^2 or p*q.
    std::uint64_t r;
    if (is_perfect_square_u64(m, r)) return {kernel, root * r};
    return {kernel * m, root};
  }
  std::map<Int, unsigned> rest;
  split_u64(m, rest);
  for (const auto& [p, e] : rest) {
    const std::uint64_t pv = to_u64(p);
    for (unsigned k = 0; k < e / 2; ++k) root *= pv;
    if (e % 2) kernel *= pv;
  }
  return {kernel, root};
}

bool is_squarefree_u64(std::uint64_t n) {
  if (n == 0) return false;
  if (n % 4 == 0) return false;
  std::uint64_t m = n % 2 == 0 ? n / 2 : n;
  const auto primes = small_primes();
  const auto& div = odd_divisors();
  std::size_t i = 1;
  for (; i < primes.size(); ++i) {
    const std::uint64_t p = primes[i];
    if (static_cast<unsigned __int128>(p) * p * p > m) break;
    if (!div[i - 1].divides(m)) continue;
    m /= p;
    if (div[i - 1].divides(m)) return false;
  }
  if (m == 1) return true;
  if (i < primes.size()) {
    std::uint64_t r;
    return !is_perfect_square_u64(m, r);
  }
  return squarefree_split_u64(m).second == 1;
}

SquarefreeSplit squarefree_split(const Int& n) {
  if (n == 0) throw DomainError("squarefree_split: 0 has no squarefree kernel");
  const int sign = sgn(n);
  const Int mag = abs(n);
  if (fits_u64(mag)) {
    auto [k, r] = squarefree_split_u64(to_u64(mag));
    return {Int(from_u64(k) * sign), from_u64(r)};
  }
  Int kernel = sign, root = 1, m = mag;
  for (std::uint64_t p : small_primes()) {
    if (mpz_cmp_ui(m.get_mpz_t(), p * p * p) < 0) break;
    unsigned e = 0;
    while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
      mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
      ++e;
    }
    for (unsigned k = 0; k < e / 2; ++k) root *= p;
    if (e % 2) kernel *= p;
  }
  if (m == 1) return {kernel, root};
  const Int limit = Int(kTrialLimit);
  if (m < limit * limit * limit) {
    if (mpz_perfect_square_p(m.get_mpz_t())) {
      return {kernel, Int(root * sqrt(m))};
    }
    return {Int(kernel * m), root};
  }
  std::map<Int, unsigned> rest;
  split_mpz(m, rest);
  for (const auto& [p, e] : rest) {
    for (unsigned k = 0; k < e / 2; ++k) root *= p;
    if (e % 2) kernel *= p;
  }
  return {kernel, root};
}

bool is_squarefree(const Int& n) {
  if (n == 0) return false;
  const Int mag = abs(n);
  if (fits_u64(mag)) return is_squarefree_u64(to_u64(mag));
  return squarefree_split(n).root == 1;
}

int moebius(std::uint64_t n) {
  if (n == 0) throw DomainError("moebius: n must be positive");
  int mu = 1;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    mu = -mu;
  }
  if (n > 1) mu = -mu;
  return mu;
}

}  // namespace sqd
