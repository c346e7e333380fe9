#pragma once

// Exact integer arithmetic: prime sieve, factorization, squarefree kernels.

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace sqd {

using Int = mpz_class;

/// Largest sieve limit accepted by primes_up_to (about 512 MiB of odd-only bits).
inline constexpr std::uint64_t kSieveLimitMax = std::uint64_t{1} << 32;

/// All primes <= limit, ascending. Throws BudgetError above kSieveLimitMax.
std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);

/// Primes below 10^6, built once on first use.
std::span<const std::uint64_t> small_primes();

struct PrimePower {
  Int prime;
  unsigned exponent = 0;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct Factorization {
  int sign = 1;
  std::vector<PrimePower> prime_powers;  // primes strictly increasing

  Int product() const;
};

/// Signed squarefree part and square root: n = kernel * root^2.
struct SquarefreeSplit {
  Int kernel;
  Int root;
};

Factorization factorize(const Int& n);
SquarefreeSplit squarefree_split(const Int& n);
bool is_squarefree(const Int& n);

// 64-bit fast paths used by the hot loops in density and qclasses.
bool is_squarefree_u64(std::uint64_t n);
std::pair<std::uint64_t, std::uint64_t> squarefree_split_u64(std::uint64_t n);  // (kernel, root)

/// Deterministic Miller-Rabin; exact below 3.3e24, probabilistic (fixed bases) above.
bool is_probable_prime(const Int& n);
bool is_prime_u64(std::uint64_t n);

/// Deterministic Pollard-Brent rho. Returns a nontrivial factor of composite n > 1.
Int pollard_brent(const Int& n);

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m);
std::uint64_t isqrt_u64(std::uint64_t n);

/// Moebius function of a small positive integer (trial division).
int moebius(std::uint64_t n);

}  // namespace sqd
