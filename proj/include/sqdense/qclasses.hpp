#pragma once

// Square classes of polynomial values: f = c g^2 h, the constants delta_r and
// c_f, the number of classes in Q*/Q*^2 (plus 0) hit by f(1..B), and the
// count of solutions of f(m) = q f(n).

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <vector>

#include "sqdense/arith.hpp"
#include "sqdense/mpoly.hpp"

namespace sqd {

using Rational = mpq_class;

/// f = c * g^2 * h with g primitive, h primitive squarefree, both with
/// positive leading coefficient; c takes whatever is left.
struct SquarefreeDecomposition {
  Int c;
  ZPoly g;
  ZPoly h;
};

/// f must be univariate (or constant) and nonzero.
SquarefreeDecomposition squarefree_decompose(const ZPoly& f);

struct DeltaTable {
  std::uint64_t a = 1;
  Int b;
  /// delta[r] = 1/m^2 with m = witness[r], or 0 when no m works.
  std::vector<Rational> delta;
  std::vector<std::optional<std::uint64_t>> witness;

  Rational sum() const;
};

/// For r = 0..a-1, the least m in 1..a with m^2 r = b (mod a).
DeltaTable delta_table(std::uint64_t a, const Int& b);

struct CfConstant {
  long deg_h = 0;
  /// c_f = over_pi_squared / pi^2 when deg h = 1; otherwise c_f is exactly
  /// 0 (deg h = 0) or 1 (deg h >= 2) and this field is 0.
  Rational over_pi_squared;
  double value = 0;
};

CfConstant c_f_constant(const ZPoly& f);

struct PrefixPoint {
  std::uint64_t bound = 0;
  std::uint64_t distinct = 0;
  double ratio = 0;
};

struct ImageCount {
  std::uint64_t bound = 0;
  std::uint64_t distinct = 0;
  double ratio = 0;
  std::vector<PrefixPoint> per_prefix;
};

/// Distinct classes of f(1), ..., f(B) in Q*/Q*^2 together with 0, each class
/// represented by the signed squarefree kernel. With prefix_step > 0 the
/// running count is recorded every prefix_step values and at B.
ImageCount image_count(const ZPoly& f, std::uint64_t B, std::uint64_t prefix_step = 0);

/// Number of (m, n) in [1, B]^2 with f(m) = q f(n). f must have degree >= 2
/// and no repeated factor; q must be nonzero and different from 1.
std::uint64_t collision_count(const ZPoly& f, const Rational& q, std::uint64_t B);

}  // namespace sqd
