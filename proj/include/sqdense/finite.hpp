#pragma once

// Finite fields F_q (q = p^e) and the polynomial ring A = F_q[t].

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sqdense/arith.hpp"
#include "sqdense/error.hpp"

namespace sqd {

/// Default cap on q; extension-field tables are q x q.
inline constexpr std::uint32_t kMaxFieldOrder = 64;
inline constexpr std::uint32_t kMaxPrimeField = 1021;

/// The field F_{p^e}. Elements are coefficient tuples (c_0, ..., c_{e-1}) over
/// F_p packed as the integer sum c_i p^i, reduced modulo the lexicographically
/// first monic irreducible of degree e.
class Fq {
 public:
  using Elem = std::uint32_t;

  /// Throws DomainError unless q is a prime power. Extension fields are capped
  /// at max_order, prime fields at kMaxPrimeField.
  static std::shared_ptr<const Fq> make(std::uint32_t q, std::uint32_t max_order = kMaxFieldOrder);

  std::uint32_t p() const noexcept { return p_; }
  std::uint32_t e() const noexcept { return e_; }
  std::uint32_t q() const noexcept { return q_; }
  /// Defining modulus over F_p, low to high, monic of degree e (just {0,1} for e = 1).
  const std::vector<std::uint32_t>& modulus() const noexcept { return modulus_; }

  Elem add(Elem a, Elem b) const noexcept { return add_[a * q_ + b]; }
  Elem sub(Elem a, Elem b) const noexcept { return add_[a * q_ + neg_[b]]; }
  Elem neg(Elem a) const noexcept { return neg_[a]; }
  Elem mul(Elem a, Elem b) const noexcept { return mul_[a * q_ + b]; }
  /// Throws DomainError on zero.
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

  /// Image of an integer under Z -> F_p -> F_q.
  Elem from_int(const Int& n) const;
  Elem from_int(long n) const { return from_int(Int(n)); }
  std::vector<std::uint32_t> digits(Elem a) const;
  /// Throws DomainError when a digit is >= p or the tuple is longer than e.
  Elem from_digits(const std::vector<std::uint32_t>& digits) const;
  bool in_prime_field(Elem a) const noexcept { return a < p_; }

  /// "3" in the prime field, "[c0,c1,...]" otherwise.
  std::string render(Elem a) const;

 private:
  Fq() = default;

  std::uint32_t p_ = 0;
  std::uint32_t e_ = 0;
  std::uint32_t q_ = 0;
  std::vector<std::uint32_t> modulus_;
  std::vector<Elem> add_;
  std::vector<Elem> mul_;
  std::vector<Elem> neg_;
  std::vector<Elem> inv_;
};

/// Decomposes q as p^e; returns {0, 0} if q is not a prime power.
std::pair<std::uint32_t, std::uint32_t> prime_power_split(std::uint64_t q);

/// A polynomial in t over F_q, coefficients low to high with no trailing zeros.
/// The zero polynomial has no coefficients and degree -1.
struct FqPoly {
  std::vector<Fq::Elem> c;

  FqPoly() = default;
  explicit FqPoly(std::vector<Fq::Elem> coeffs) : c(std::move(coeffs)) { trim(); }
  static FqPoly constant(Fq::Elem a) { return FqPoly(std::vector<Fq::Elem>{a}); }
  static FqPoly monomial(Fq::Elem a, std::size_t k);

  bool is_zero() const noexcept { return c.empty(); }
  int degree() const noexcept { return static_cast<int>(c.size()) - 1; }
  Fq::Elem lead() const noexcept { return c.empty() ? 0 : c.back(); }
  Fq::Elem coeff(std::size_t i) const noexcept { return i < c.size() ? c[i] : 0; }
  void trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
  }

  friend bool operator==(const FqPoly&, const FqPoly&) = default;
  friend auto operator<=>(const FqPoly& a, const FqPoly& b) {
    if (a.c.size() != b.c.size()) return a.c.size() <=> b.c.size();
    for (std::size_t i = a.c.size(); i-- > 0;) {
      if (a.c[i] != b.c[i]) return a.c[i] <=> b.c[i];
    }
    return std::strong_ordering::equal;
  }
};

/// The ring A = F_q[t]. Stateless apart from the field it is built over; all
/// operations are pure.
class FqtRing {
 public:
  using Elem = FqPoly;

  explicit FqtRing(std::shared_ptr<const Fq> field);
  explicit FqtRing(std::uint32_t q) : FqtRing(Fq::make(q)) {}

  const Fq& field() const noexcept { return *field_; }
  const std::shared_ptr<const Fq>& field_ptr() const noexcept { return field_; }
  std::uint32_t q() const noexcept { return field_->q(); }
  std::uint32_t characteristic() const noexcept { return field_->p(); }

  Elem zero() const { return {}; }
  Elem one() const { return FqPoly::constant(1); }
  Elem t() const { return FqPoly::monomial(1, 1); }
  Elem from_int(const Int& n) const { return FqPoly::constant(field_->from_int(n)); }
  bool is_zero(const Elem& a) const noexcept { return a.is_zero(); }
  bool is_one(const Elem& a) const noexcept { return a.c.size() == 1 && a.c[0] == 1; }
  bool is_unit(const Elem& a) const noexcept { return a.c.size() == 1; }

  Elem add(const Elem& a, const Elem& b) const;
  Elem sub(const Elem& a, const Elem& b) const;
  Elem neg(const Elem& a) const;
  Elem mul(const Elem& a, const Elem& b) const;
  Elem scale(const Elem& a, Fq::Elem s) const;
  /// Throws DomainError when b is zero.
  std::pair<Elem, Elem> divrem(const Elem& a, const Elem& b) const;
  Elem rem(const Elem& a, const Elem& b) const { return divrem(a, b).second; }
  /// Monic gcd; gcd(0, 0) = 0.
  Elem gcd(const Elem& a, const Elem& b) const;
  Elem monic(const Elem& a) const;
  /// Throws DomainError when b does not divide a.
  Elem divexact(const Elem& a, const Elem& b) const;
  /// The constant lead(a) (1 for zero), so that a / unit_part(a) is monic.
  Elem unit_part(const Elem& a) const { return FqPoly::constant(a.is_zero() ? 1 : a.lead()); }
  Elem pow(const Elem& a, std::uint64_t e) const;
  Elem powmod(const Elem& a, const Int& e, const Elem& m) const;

  /// d/dt with characteristic-p collapse.
  Elem derivative(const Elem& a) const;
  /// gcd(a, a') is a unit. Throws DomainError on zero.
  bool is_squarefree(const Elem& a) const;
  /// Rabin irreducibility test; a must be nonconstant.
  bool is_irreducible(const Elem& a) const;

  /// |a| = #(A/a) = q^deg a, with |0| = 0.
  Int norm(const Elem& a) const;

  /// Enumeration index of polynomials of degree < k: sum c_i q^i.
  std::uint64_t index_of(const Elem& a) const;
  Elem from_index(std::uint64_t idx) const;

  std::string render(const Elem& a) const;
  /// Parses "t^3+2*t+1"-style text (coefficients may be bracketed extension tuples).
  Elem parse(std::string_view text) const;

  friend bool operator==(const FqtRing& a, const FqtRing& b) { return a.q() == b.q(); }

 private:
  std::shared_ptr<const Fq> field_;
};

/// A nonzero prime of A, generated by a monic irreducible pi.
class PrimeA {
 public:
  /// Throws DomainError unless pi is monic and irreducible.
  PrimeA(const FqtRing& ring, FqPoly pi);

  const FqPoly& pi() const noexcept { return pi_; }
  int degree() const noexcept { return pi_.degree(); }
  /// |p| = q^deg pi.
  std::uint64_t norm() const noexcept { return norm_; }

  friend bool operator==(const PrimeA& a, const PrimeA& b) { return a.pi_ == b.pi_; }

 private:
  FqPoly pi_;
  std::uint64_t norm_ = 0;
};

/// Necklace count (1/d) sum_{e|d} mu(e) q^{d/e} of monic irreducibles of degree d.
Int necklace_count(std::uint64_t q, unsigned d);

/// All monic irreducibles of degree exactly d, in index order. Throws
/// BudgetError when q^d exceeds the budget.
std::vector<PrimeA> irreducibles_of_degree(const FqtRing& ring, unsigned d,
                                           std::uint64_t budget = kDefaultBudget);

/// Residues of (A/pi^power)^arity in pi-adic digit form r_0 + pi r_1 + ...
/// with deg r_i < deg pi. Each tuple is visited exactly once, in index order.
class ResidueEnumerator {
 public:
  ResidueEnumerator(const FqtRing& ring, const PrimeA& pi, unsigned power, unsigned arity,
                    std::uint64_t budget = kDefaultBudget);

  std::uint64_t size() const noexcept { return total_; }
  std::uint64_t per_coordinate() const noexcept { return per_coord_; }
  /// Writes the residue tuple with the given index into out (arity entries).
  void decode(std::uint64_t index, std::vector<FqPoly>& out) const;
  /// Residue of a single coordinate from its index in [0, per_coordinate()).
  FqPoly coordinate(std::uint64_t index) const;

  template <class Fn>
  void for_each(Fn&& fn) const {
    std::vector<FqPoly> tuple(arity_);
    for (std::uint64_t i = 0; i < total_; ++i) {
      decode(i, tuple);
      fn(static_cast<const std::vector<FqPoly>&>(tuple));
    }
  }

 private:
  FqtRing ring_;
  FqPoly pi_;
  unsigned power_;
  unsigned arity_;
  std::uint64_t digit_size_;  // |p|
  std::uint64_t per_coord_;   // |p|^power
  std::uint64_t total_;
};

}  // namespace sqd
