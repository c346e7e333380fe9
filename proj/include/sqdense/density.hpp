#pragma once

// Truncated Euler products of local counts and empirical densities over boxes.

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sqdense/arith.hpp"
#include "sqdense/error.hpp"
#include "sqdense/localcount.hpp"
#include "sqdense/mpoly.hpp"

namespace sqd {

/// Binary floating point with a 128-bit mantissa.
using Real = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<128, boost::multiprecision::digit_base_2>>;

struct EulerFactor {
  std::string prime;  // "7", "t^2+t+1" or "inf"
  Int norm;
  Int c;
  Real factor;  // 1 - c / norm^k
  /// Number of primes sharing this factor (one unless grouped by degree).
  Int multiplicity = 1;
};

struct EulerProduct {
  Real value;
  std::uint64_t cutoff = 0;  // largest prime, or largest degree over F_q[t]
  bool degree_cutoff = false;
  unsigned norm_exponent = 0;
  std::vector<EulerFactor> factors;
  /// Bracket for log(true product) - log(truncated product) under the
  /// heuristic c <= kappa |p|^(k-2) for the omitted primes.
  double kappa = 0;
  double tail_low = 0;
  double tail_high = 0;
  bool rigorous = false;
  /// Label of a prime whose factor vanished; value is then exactly 0.
  std::optional<std::string> zero_at;

  double value_double() const { return value.convert_to<double>(); }
};

/// Multiplies out (1 - c/|p|^k) over the given counts, which must cover each
/// prime up to the cutoff exactly once (primes p <= cutoff over Z, monic
/// irreducibles of degree <= cutoff over F_q[t]). Throws DomainError on a
/// duplicate, missing, or out-of-range prime.
EulerProduct euler_product(const std::vector<LocalCount>& counts, unsigned norm_exponent, std::uint64_t cutoff);

/// Recomputes kappa and the tail bracket of a product from its factors,
/// cutoff and norm exponent. field_order is q for products over F_q[t]
/// (cutoff in degrees) and 0 over Z.
void apply_tail_bracket(EulerProduct& e, std::uint64_t field_order);

/// Knobs shared by the product routines.
struct ProductOptions {
  bool override_check = false;  // skip the heuristic squarefree/coprime check
  unsigned trials = 20;
  std::uint64_t seed = 1;
  std::uint64_t budget = kDefaultBudget;
};

/// prod_{p <= cutoff} (1 - c_p / p^(2n)) with c_p the zeros of f mod p^2.
/// Throws PreconditionError when f fails the squarefree check.
EulerProduct squarefree_density_Z(const ZPoly& f, std::uint64_t cutoff, const ProductOptions& opt = {});
/// prod_{p <= cutoff} (1 - c_p / p^n) with c_p the common zeros mod p.
/// Throws PreconditionError when a random specialization exposes a common factor.
EulerProduct coprime_density(const ZPoly& f, const ZPoly& g, std::uint64_t cutoff, const ProductOptions& opt = {});
/// Product over monic irreducibles of degree <= degree_cutoff.
EulerProduct squarefree_density_A(const APoly& f, unsigned degree_cutoff, const ProductOptions& opt = {});
EulerProduct coprime_density_A(const APoly& f, const APoly& g, unsigned degree_cutoff, const ProductOptions& opt = {});

// ---------------------------------------------------------------------------
// Empirical densities.

enum class Regime { unrestricted, last_large, nested };
enum class SampleMode { exhaustive, monte_carlo };

struct BoxSpec {
  /// Per-coordinate bounds: 1..B_i over Z (or -B_i..B_i without 0 when
  /// signed), polynomials of degree <= D_i over F_q[t] (0 included).
  std::vector<std::uint64_t> dims;
  Regime regime = Regime::unrestricted;
  double ratio = 32;                   // last_large
  std::vector<std::size_t> order;      // nested: permutation of coordinates
  std::vector<double> ratios;          // nested: B_{order[k+1]} = ratios[k] * B_{order[k]}
  SampleMode mode = SampleMode::exhaustive;
  std::uint64_t samples = 0;
  std::uint64_t seed = 1;
  bool signed_box = false;
  unsigned threads = 1;
  std::uint64_t budget = kDefaultBudget;
};

/// The dims actually counted after applying the regime.
std::vector<std::uint64_t> materialize(const BoxSpec& box, std::uint32_t q = 0);

struct Predicate {
  enum class Kind { squarefree, coprime, zero, custom };
  Kind kind = Kind::squarefree;
  AnyPoly f = ZPoly(IntegerRing{}, {});
  std::optional<AnyPoly> g;
  /// For Kind::custom over Z: called with the point.
  std::function<bool(const std::vector<Int>&)> custom;
  std::size_t custom_arity = 0;

  static Predicate squarefree(AnyPoly f);
  static Predicate coprime(AnyPoly f, AnyPoly g);
  static Predicate zero(AnyPoly f);
  static Predicate custom_z(std::size_t arity, std::function<bool(const std::vector<Int>&)> fn);

  std::size_t arity() const;
  bool over_integers() const;
  std::string name() const;
};

struct DensityEstimate {
  std::uint64_t hits = 0;
  std::uint64_t total = 0;
  double ratio = 0;
  double half_width = 0;  // 3 sigma for Monte Carlo, 0 when exhaustive
  SampleMode mode = SampleMode::exhaustive;
  std::vector<std::uint64_t> dims;
  std::uint64_t seed = 0;
};

/// Exhaustive counts are exact; Monte Carlo draws `samples` uniform points
/// split over a fixed set of generator shards, so the result depends only on
/// the seed and not on the thread count.
DensityEstimate empirical_density(const Predicate& pred, const BoxSpec& box);

struct WeakDensity {
  std::vector<std::vector<std::size_t>> orders;
  std::vector<DensityEstimate> estimates;
  std::size_t best = 0;  // index of the largest ratio
};

/// Nested-regime estimates for each permutation (all of them when `orders`
/// is empty), together with the maximum.
WeakDensity empirical_density_weak(const Predicate& pred, const BoxSpec& box,
                                   std::vector<std::vector<std::size_t>> orders = {});

/// Fraction of squarefree a in F_q[t] with deg a <= D (0 excluded from the
/// hits, included in the total), by direct enumeration.
DensityEstimate squarefree_count_A(std::uint32_t q, unsigned D, std::uint64_t budget = kDefaultBudget);

}  // namespace sqd
