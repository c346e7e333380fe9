#pragma once

// Counting zeros of polynomials modulo p, p^2 (over Z) and modulo a prime of
// A = F_q[t] and its square, by enumeration and by the smooth/singular split.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sqdense/arith.hpp"
#include "sqdense/error.hpp"
#include "sqdense/finite.hpp"
#include "sqdense/mpoly.hpp"

namespace sqd {

/// Counting primes over Z are limited to this bound so that p^2 fits a machine word.
inline constexpr std::uint64_t kMaxCountingPrime = std::uint64_t{1} << 31;

enum class CountMethod { brute, hensel };

std::string to_string(CountMethod m);

struct LocalCount {
  std::variant<std::uint64_t, PrimeA> prime;
  /// "7" or the rendered generator, e.g. "t^2+t+1".
  std::string label;
  Int count;
  unsigned power = 2;
  unsigned arity = 0;
  CountMethod method = CountMethod::brute;
  // Hensel bookkeeping (zero for brute counts): zeros mod the prime split into
  // smooth ones and singular ones, and how many singular zeros lift.
  Int smooth_zeros;
  Int singular_zeros;
  Int singular_lifting;

  /// |prime|: p, or q^deg pi.
  Int norm() const;
};

/// Exact count of x in (Z/p^power)^n with f(x) = 0. Throws BudgetError when
/// p^(power n) exceeds the budget (use count_zeros_hensel instead).
LocalCount count_zeros_brute(const ZPoly& f, std::uint64_t p, unsigned power,
                             std::uint64_t budget = kDefaultBudget);
LocalCount count_zeros_brute(const APoly& f, const PrimeA& pi, unsigned power,
                             std::uint64_t budget = kDefaultBudget);

/// Count of zeros mod p^2 from the zeros mod p: each smooth zero lifts to
/// p^(n-1) zeros, each singular zero to p^n or none depending on f(x) mod p^2.
/// Over Z the budget bounds p^(n-1) (one coordinate is solved by root
/// finding); over A it bounds |p|^n.
LocalCount count_zeros_hensel(const ZPoly& f, std::uint64_t p, std::uint64_t budget = kDefaultBudget);
LocalCount count_zeros_hensel(const APoly& f, const PrimeA& pi, std::uint64_t budget = kDefaultBudget);

/// Count of x in (A/p)^n with f(x) = g(x) = 0 (power 1).
LocalCount count_common_zeros(const ZPoly& f, const ZPoly& g, std::uint64_t p,
                              std::uint64_t budget = kDefaultBudget);
LocalCount count_common_zeros(const APoly& f, const APoly& g, const PrimeA& pi,
                              std::uint64_t budget = kDefaultBudget);

/// Distinct roots in [0, p) of a polynomial over F_p given low-to-high with
/// coefficients in [0, p). The zero polynomial is rejected.
std::vector<std::uint64_t> roots_mod_p(std::vector<std::uint64_t> coeffs, std::uint64_t p);

/// Replaces each selected variable x by x_0^p + t x_1^p + ... + t^(p-1) x_(p-1)^p
/// where p is the characteristic; the new variables x_j take the place of x.
APoly restrict_scalars(const APoly& f, const std::vector<std::string>& selected);

struct CriterionResult {
  bool via_square = false;  // pi^2 | F(a)
  bool via_pair = false;    // pi | F(a) and pi | (dF/dt)(a)
  friend bool operator==(const CriterionResult&, const CriterionResult&) = default;
};

/// Evaluates both sides of the t-derivative criterion at a point of A^n.
/// Throws PreconditionError unless every exponent of F is divisible by the
/// characteristic.
CriterionResult derivative_criterion(const APoly& F, const PrimeA& pi, std::span<const FqPoly> point);

struct CriterionBoxReport {
  std::uint64_t points = 0;
  std::uint64_t agreements = 0;
  std::uint64_t square_divisible = 0;  // points with pi^2 | F(a)
  std::optional<std::vector<FqPoly>> first_mismatch;
};

/// Runs the criterion over every point whose coordinates have degree below
/// lift * deg pi (the lift box). Evaluation happens in A/pi^2 and A/pi.
CriterionBoxReport derivative_criterion_box(const APoly& F, const PrimeA& pi, unsigned lift = 3,
                                            std::uint64_t budget = kDefaultBudget);

}  // namespace sqd
