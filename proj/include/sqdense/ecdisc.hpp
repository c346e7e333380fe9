#pragma once

// Discriminants of short Weierstrass curves y^2 = x^3 + A x + B over F_q[t]:
// local densities of a double zero, the constant gamma_q, the limit of R_d,
// and the empirical density of pairs (A, B) with squarefree discriminant.

#include <cstdint>
#include <optional>
#include <string>

#include "sqdense/density.hpp"
#include "sqdense/finite.hpp"
#include "sqdense/mpoly.hpp"
#include "sqdense/qclasses.hpp"

namespace sqd {

/// A closed point of P^1 over F_q: a finite prime of F_q[t] or infinity.
struct P1Point {
  std::optional<PrimeA> finite;  // empty for infinity
  std::uint64_t norm = 0;        // q^deg; infinity has degree 1

  static P1Point at_infinity(std::uint32_t q) { return {std::nullopt, q}; }
  static P1Point at(const PrimeA& pi) { return {pi, pi.norm()}; }
  bool is_infinity() const { return !finite.has_value(); }
};

/// -16 (4 A^3 + 27 B^2) over F_q[t] in the variables A, B. Throws DomainError
/// when q is divisible by 2 or 3.
APoly discriminant_poly(std::uint32_t q);

struct LocalDoubleZero {
  Rational density;          // (2N^2 - N) / N^4
  std::optional<Int> count;  // c_p from the Hensel count, when cross-checked
};

/// The density of pairs whose discriminant vanishes to order two at the
/// point. Finite points of degree <= 2 are cross-checked against the Hensel
/// count of zeros mod p^2; a mismatch throws InternalError.
LocalDoubleZero local_double_zero_density(std::uint32_t q, const P1Point& point);

struct EcConstant {
  Rational prefactor;
  EulerProduct product;  // infinity and all finite points of degree <= cutoff
  Real value;            // prefactor * product

  double value_double() const { return value.convert_to<double>(); }
};

/// q^3 / ((q-1)^2 (q+1)) times the product of (1 - (2N^2 - N)/N^4) over the
/// points of P^1 of degree <= cutoff. Finite points are grouped by degree.
EcConstant gamma_q(std::uint32_t q, unsigned degree_cutoff);
/// Same product with prefactor q / (q-1).
EcConstant rd_limit(std::uint32_t q, unsigned degree_cutoff);

/// Fraction of (A, B) with deg A, deg B <= degree_bound whose discriminant is
/// squarefree in F_q[t] (zero counts as not squarefree). Only mode, samples,
/// seed, threads and budget are read from `sampling`.
DensityEstimate empirical_disc_density(std::uint32_t q, unsigned degree_bound, const BoxSpec& sampling = {});

}  // namespace sqd
