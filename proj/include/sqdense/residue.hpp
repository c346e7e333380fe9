#pragma once

// Finite residue rings Z/m and A/M (M a nonconstant polynomial of A = F_q[t])
// with small-integer element handles, and a compiled polynomial evaluator over
// them. These back the enumeration loops of localcount and density.

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "sqdense/arith.hpp"
#include "sqdense/error.hpp"
#include "sqdense/finite.hpp"
#include "sqdense/mpoly.hpp"

namespace sqd {

/// Z/m for 2 <= m < 2^32.
class ZmodRing {
 public:
  using Elem = std::uint64_t;

  explicit ZmodRing(std::uint64_t m);

  std::uint64_t size() const noexcept { return m_; }
  std::uint64_t modulus() const noexcept { return m_; }
  Elem zero() const noexcept { return 0; }
  Elem one() const noexcept { return 1 % m_; }
  Elem add(Elem a, Elem b) const noexcept {
    const Elem s = a + b;
    return s >= m_ ? s - m_ : s;
  }
  Elem sub(Elem a, Elem b) const noexcept { return a >= b ? a - b : a + m_ - b; }
  Elem neg(Elem a) const noexcept { return a == 0 ? 0 : m_ - a; }
  Elem mul(Elem a, Elem b) const noexcept { return a * b % m_; }
  Elem from_int(const Int& n) const;
  bool is_zero(Elem a) const noexcept { return a == 0; }

 private:
  std::uint64_t m_;
};

/// A/M for a monic nonconstant M in A = F_q[t]. Elements are the indices
/// (FqtRing::index_of) of the remainders of degree < deg M. Small rings use
/// full operation tables; residue fields use log/exp tables; everything else
/// falls back to digit arithmetic.
class AResidueRing {
 public:
  using Elem = std::uint32_t;

  /// Largest ring order that gets full add/mul tables.
  static constexpr std::uint32_t kTableLimit = 2500;
  /// Largest residue field that gets log/exp tables.
  static constexpr std::uint32_t kLogLimit = 1u << 22;

  /// Throws DomainError for a constant modulus, BudgetError when q^deg M >= 2^31.
  /// work_hint is the expected number of ring operations; lookup tables are
  /// built only when their construction cost is small next to it.
  AResidueRing(const FqtRing& ring, const FqPoly& modulus, std::uint64_t work_hint = ~std::uint64_t{0});

  const FqtRing& ring() const noexcept { return ring_; }
  const FqPoly& modulus() const noexcept { return modulus_; }
  std::uint32_t size() const noexcept { return n_; }
  bool is_field() const noexcept { return field_; }

  Elem zero() const noexcept { return 0; }
  Elem one() const noexcept { return 1; }
  bool is_zero(Elem a) const noexcept { return a == 0; }

  Elem add(Elem a, Elem b) const {
    if (!add_.empty()) return add_[std::size_t{a} * n_ + b];
    if (q_ == 2) return a ^ b;
    if (a == 0 || b == 0) return a | b;
    return slow_add(a, b);
  }
  Elem neg(Elem a) const {
    if (q_ == 2) return a;
    return neg_.empty() ? slow_neg(a) : neg_[a];
  }
  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
  Elem mul(Elem a, Elem b) const {
    if (!mul_.empty()) return mul_[std::size_t{a} * n_ + b];
    if (!log_.empty()) {
      if (a == 0 || b == 0) return 0;
      std::uint32_t s = log_[a] + log_[b];
      if (s >= n_ - 1) s -= n_ - 1;
      return exp_[s];
    }
    if (a <= 1 || b <= 1) return a <= 1 ? (a ? b : 0) : a * b;
    return slow_mul(a, b);
  }
  Elem pow(Elem a, std::uint64_t e) const;

  Elem from_poly(const FqPoly& a) const;
  Elem from_int(const Int& n) const { return from_poly(ring_.from_int(n)); }
  FqPoly to_poly(Elem a) const { return ring_.from_index(a); }

  /// Reduces an element of a ring A/M' with M | M' (given by its index) into this ring.
  Elem reduce_index(std::uint64_t index) const;

 private:
  std::vector<std::uint32_t> digits(std::uint64_t a) const;
  Elem from_digits(const std::vector<std::uint32_t>& d) const;
  Elem slow_add(Elem a, Elem b) const;
  Elem slow_neg(Elem a) const;
  Elem slow_mul(Elem a, Elem b) const;

  FqtRing ring_;
  FqPoly modulus_;
  std::uint32_t q_ = 0;
  std::uint32_t m_ = 0;  // degree of the modulus
  std::uint32_t n_ = 0;  // q^m
  bool field_ = false;
  std::vector<std::uint16_t> add_, mul_;
  std::vector<std::uint32_t> neg_, log_, exp_;
  std::vector<std::uint32_t> mod_digits_;
};

/// A polynomial with coefficients mapped into a residue ring, evaluated by
/// per-variable power tables. Holds scratch space, so one instance must not
/// be evaluated from two threads at once.
template <class Ring>
class CompiledPoly {
 public:
  using Elem = typename Ring::Elem;

  CompiledPoly(const Ring& ring, std::size_t arity) : ring_(&ring), arity_(arity), degree_(arity, 0) {}

  void add_term(const Exponents& e, Elem c) {
    if (ring_->is_zero(c)) return;
    for (std::size_t i = 0; i < arity_; ++i) degree_[i] = std::max(degree_[i], e[i]);
    terms_.push_back({c, e});
  }

  std::size_t arity() const noexcept { return arity_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::uint32_t degree_in(std::size_t var) const { return degree_[var]; }

  Elem evaluate(const Elem* x) const {
    fill_powers(x, arity_);
    Elem acc = ring_->zero();
    for (const auto& t : terms_) {
      Elem v = t.coef;
      for (std::size_t i = 0; i < arity_; ++i) {
        if (t.exps[i]) v = ring_->mul(v, pow_[offset_[i] + t.exps[i]]);
      }
      acc = ring_->add(acc, v);
    }
    return acc;
  }

  /// Coefficients of the univariate polynomial in `var` obtained by fixing
  /// the other coordinates of x (x[var] is ignored). out has degree_in(var)+1 entries.
  void coefficients_in(std::size_t var, const Elem* x, std::vector<Elem>& out) const {
    fill_powers(x, var);
    out.assign(degree_[var] + 1, ring_->zero());
    for (const auto& t : terms_) {
      Elem v = t.coef;
      for (std::size_t i = 0; i < arity_; ++i) {
        if (i != var && t.exps[i]) v = ring_->mul(v, pow_[offset_[i] + t.exps[i]]);
      }
      out[t.exps[var]] = ring_->add(out[t.exps[var]], v);
    }
  }

 private:
  struct Term {
    Elem coef;
    Exponents exps;
  };

  void fill_powers(const Elem* x, std::size_t skip) const {
    if (offset_.empty()) {
      std::size_t total = 0;
      for (std::size_t i = 0; i < arity_; ++i) {
        offset_.push_back(total);
        total += degree_[i] + 1;
      }
      pow_.assign(total, ring_->zero());
    }
    for (std::size_t i = 0; i < arity_; ++i) {
      if (i == skip) continue;
      Elem* p = &pow_[offset_[i]];
      p[0] = ring_->one();
      for (std::uint32_t k = 1; k <= degree_[i]; ++k) p[k] = ring_->mul(p[k - 1], x[i]);
    }
  }

  const Ring* ring_;
  std::size_t arity_;
  std::vector<std::uint32_t> degree_;
  std::vector<Term> terms_;
  mutable std::vector<std::size_t> offset_;
  mutable std::vector<Elem> pow_;
};

/// f with coefficients reduced into Z/m.
CompiledPoly<ZmodRing> compile(const ZPoly& f, const ZmodRing& ring);
/// f with coefficients reduced into A/M.
CompiledPoly<AResidueRing> compile(const APoly& f, const AResidueRing& ring);

}  // namespace sqd
