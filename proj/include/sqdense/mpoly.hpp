#pragma once

// Sparse multivariate polynomials over an exact coefficient ring.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "sqdense/arith.hpp"
#include "sqdense/error.hpp"
#include "sqdense/finite.hpp"

namespace sqd {

/// The coefficient ring Z.
struct IntegerRing {
  using Elem = Int;

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  Elem from_int(const Int& n) const { return n; }
  bool is_zero(const Elem& a) const { return a == 0; }
  bool is_one(const Elem& a) const { return a == 1; }
  Elem add(const Elem& a, const Elem& b) const { return a + b; }
  Elem sub(const Elem& a, const Elem& b) const { return a - b; }
  Elem neg(const Elem& a) const { return -a; }
  Elem mul(const Elem& a, const Elem& b) const { return a * b; }
  /// Nonnegative gcd.
  Elem gcd(const Elem& a, const Elem& b) const { return ::gcd(a, b); }
  /// Throws DomainError when b does not divide a.
  Elem divexact(const Elem& a, const Elem& b) const {
    if (b == 0 || !mpz_divisible_p(a.get_mpz_t(), b.get_mpz_t())) throw DomainError("inexact integer division");
    Int q;
    mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
  }
  /// Sign of a (the unit making a/unit normal); 1 for zero.
  Elem unit_part(const Elem& a) const { return sgn(a) < 0 ? -1 : 1; }
  std::string render(const Elem& a) const { return a.get_str(); }

  friend bool operator==(const IntegerRing&, const IntegerRing&) { return true; }
};

/// Identifies the coefficient ring: Z (q == 0) or F_q[t].
struct RingTag {
  std::uint32_t q = 0;

  static RingTag integers() { return {0}; }
  static RingTag fqt(std::uint32_t q) { return {q}; }
  bool is_integers() const noexcept { return q == 0; }
  std::string name() const { return q == 0 ? "Z" : "F_" + std::to_string(q) + "[t]"; }
  friend bool operator==(const RingTag&, const RingTag&) = default;
};

using Exponents = std::vector<std::uint32_t>;

/// Graded lexicographic order, largest first.
struct GrlexGreater {
  bool operator()(const Exponents& a, const Exponents& b) const {
    std::uint64_t da = 0, db = 0;
    for (auto e : a) da += e;
    for (auto e : b) db += e;
    if (da != db) return da > db;
    return a > b;
  }
};

/// Orders variable names so that x2 < x10 and plain names sort lexicographically.
bool natural_less(std::string_view a, std::string_view b);

template <class R>
class MPoly {
 public:
  using Ring = R;
  using Elem = typename R::Elem;
  using TermMap = std::map<Exponents, Elem, GrlexGreater>;

  MPoly(R ring, std::vector<std::string> vars) : ring_(std::move(ring)), vars_(std::move(vars)) {}

  static MPoly constant(R ring, std::vector<std::string> vars, Elem c) {
    MPoly out(std::move(ring), std::move(vars));
    out.add_term(Exponents(out.arity(), 0), std::move(c));
    return out;
  }
  static MPoly variable(R ring, std::vector<std::string> vars, std::size_t index) {
    MPoly out(std::move(ring), std::move(vars));
    Exponents e(out.arity(), 0);
    e.at(index) = 1;
    out.add_term(std::move(e), out.ring_.one());
    return out;
  }

  const R& ring() const noexcept { return ring_; }
  const std::vector<std::string>& variables() const noexcept { return vars_; }
  std::size_t arity() const noexcept { return vars_.size(); }
  const TermMap& terms() const noexcept { return terms_; }
  std::size_t num_terms() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const noexcept {
    return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
  }

  std::optional<std::size_t> index_of(std::string_view name) const {
    auto it = std::find(vars_.begin(), vars_.end(), name);
    if (it == vars_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - vars_.begin());
  }

  /// Adds c * x^e, merging with an existing term and dropping zeros.
  void add_term(Exponents e, Elem c) {
    if (e.size() != arity()) throw DomainError("exponent tuple length does not match variable count");
    if (ring_.is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(std::move(e), c);
    if (!inserted) {
      it->second = ring_.add(it->second, c);
      if (ring_.is_zero(it->second)) terms_.erase(it);
    }
  }

  Elem coefficient(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? ring_.zero() : it->second;
  }

  static std::uint64_t total_degree(const Exponents& e) {
    std::uint64_t d = 0;
    for (auto x : e) d += x;
    return d;
  }
  /// -1 for the zero polynomial.
  long total_degree() const {
    return terms_.empty() ? -1 : static_cast<long>(total_degree(terms_.begin()->first));
  }
  unsigned degree_in(std::size_t var) const {
    unsigned d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e.at(var));
    return d;
  }

  MPoly operator-() const {
    MPoly out(ring_, vars_);
    for (const auto& [e, c] : terms_) out.terms_.emplace(e, ring_.neg(c));
    return out;
  }
  friend MPoly operator+(const MPoly& a, const MPoly& b) {
    a.check_compatible(b);
    MPoly out = a;
    for (const auto& [e, c] : b.terms_) out.add_term(e, c);
    return out;
  }
  friend MPoly operator-(const MPoly& a, const MPoly& b) { return a + (-b); }
  friend MPoly operator*(const MPoly& a, const MPoly& b) {
    a.check_compatible(b);
    MPoly out(a.ring_, a.vars_);
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        Exponents e(ea.size());
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
        out.add_term(std::move(e), a.ring_.mul(ca, cb));
      }
    }
    return out;
  }
  MPoly scale(const Elem& s) const {
    MPoly out(ring_, vars_);
    for (const auto& [e, c] : terms_) out.add_term(e, ring_.mul(c, s));
    return out;
  }
  MPoly pow(unsigned k) const {
    MPoly result = constant(ring_, vars_, ring_.one()), base = *this;
    while (k) {
      if (k & 1) result = result * base;
      k >>= 1;
      if (k) base = base * base;
    }
    return result;
  }

  /// Exact value at a point; per-variable power tables, one pass over the terms.
  Elem evaluate(std::span<const Elem> point) const {
    if (point.size() != arity()) {
      throw DomainError("evaluate: expected " + std::to_string(arity()) + " coordinates, got " +
                        std::to_string(point.size()));
    }
    std::vector<std::vector<Elem>> powers(arity());
    for (std::size_t i = 0; i < arity(); ++i) {
      const unsigned d = degree_in(i);
      powers[i].reserve(d + 1);
      powers[i].push_back(ring_.one());
      for (unsigned k = 1; k <= d; ++k) powers[i].push_back(ring_.mul(powers[i].back(), point[i]));
    }
    Elem acc = ring_.zero();
    for (const auto& [e, c] : terms_) {
      Elem term = c;
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i]) term = ring_.mul(term, powers[i][e[i]]);
      }
      acc = ring_.add(acc, term);
    }
    return acc;
  }
  Elem evaluate(std::initializer_list<Elem> point) const {
    return evaluate(std::span<const Elem>(point.begin(), point.size()));
  }

  /// Formal partial derivative in a polynomial variable.
  MPoly partial_derivative(std::size_t var) const {
    if (var >= arity()) throw DomainError("partial_derivative: variable index out of range");
    MPoly out(ring_, vars_);
    for (const auto& [e, c] : terms_) {
      if (e[var] == 0) continue;
      Exponents d = e;
      d[var] -= 1;
      out.add_term(std::move(d), ring_.mul(ring_.from_int(Int(e[var])), c));
    }
    return out;
  }

  /// Applies fn to every coefficient (zeros are dropped).
  template <class Fn>
  MPoly map_coefficients(Fn&& fn) const {
    MPoly out(ring_, vars_);
    for (const auto& [e, c] : terms_) out.add_term(e, fn(c));
    return out;
  }

  /// Replaces variable `var` by g; g must share this polynomial's variables.
  MPoly substitute(std::size_t var, const MPoly& g) const {
    check_compatible(g);
    MPoly out(ring_, vars_);
    std::vector<MPoly> powers{constant(ring_, vars_, ring_.one())};
    for (unsigned k = 1; k <= degree_in(var); ++k) powers.push_back(powers.back() * g);
    for (const auto& [e, c] : terms_) {
      Exponents rest = e;
      rest[var] = 0;
      MPoly mono(ring_, vars_);
      mono.add_term(std::move(rest), c);
      out = out + mono * powers[e[var]];
    }
    return out;
  }

  /// Re-embeds into a variable list that contains every current variable.
  MPoly with_variables(const std::vector<std::string>& new_vars) const {
    std::vector<std::size_t> where(arity());
    for (std::size_t i = 0; i < arity(); ++i) {
      auto it = std::find(new_vars.begin(), new_vars.end(), vars_[i]);
      if (it == new_vars.end()) throw DomainError("variable '" + vars_[i] + "' missing from target list");
      where[i] = static_cast<std::size_t>(it - new_vars.begin());
    }
    MPoly out(ring_, new_vars);
    for (const auto& [e, c] : terms_) {
      Exponents ne(new_vars.size(), 0);
      for (std::size_t i = 0; i < e.size(); ++i) ne[where[i]] = e[i];
      out.add_term(std::move(ne), c);
    }
    return out;
  }

  friend bool operator==(const MPoly& a, const MPoly& b) {
    return a.ring_ == b.ring_ && a.vars_ == b.vars_ && a.terms_ == b.terms_;
  }

 private:
  void check_compatible(const MPoly& other) const {
    if (vars_ != other.vars_) throw DomainError("polynomials have different variable lists");
    if (!(ring_ == other.ring_)) throw DomainError("polynomials have different coefficient rings");
  }

  R ring_;
  std::vector<std::string> vars_;
  TermMap terms_;
};

using ZPoly = MPoly<IntegerRing>;
using APoly = MPoly<FqtRing>;

/// Either kind of polynomial, as produced by the runtime-tagged parser.
using AnyPoly = std::variant<ZPoly, APoly>;

/// Parses the polynomial grammar. When `vars` is empty the variable list is the
/// set of identifiers found, in natural order; otherwise identifiers outside
/// `vars` are rejected. Over F_q[t] the symbol t denotes the ring generator.
ZPoly parse_zpoly(std::string_view text, const std::vector<std::string>& vars = {});
APoly parse_apoly(std::string_view text, const FqtRing& ring, const std::vector<std::string>& vars = {});
AnyPoly parse_poly(std::string_view text, RingTag ring, const std::vector<std::string>& vars = {});

/// Canonical text; parse(render(f)) == f.
std::string render(const ZPoly& f);
std::string render(const APoly& f);

/// d/dt applied coefficient-wise (the "t" derivative of a polynomial over F_q[t]).
APoly t_partial_derivative(const APoly& f);
/// Partial derivative by name; over F_q[t] the name "t" selects t_partial_derivative.
ZPoly partial_derivative(const ZPoly& f, std::string_view var);
APoly partial_derivative(const APoly& f, std::string_view var);

/// Coefficients reduced to canonical residues in [0, m). m must be > 1.
ZPoly reduce_mod(const ZPoly& f, const Int& modulus);
/// Coefficients reduced modulo m in A (remainder of degree < deg m). m must be nonconstant.
APoly reduce_mod(const APoly& f, const FqPoly& modulus);

/// Sorted union of two variable lists (natural order).
std::vector<std::string> merge_variables(const std::vector<std::string>& a, const std::vector<std::string>& b);

struct SquarefreeCheck {
  enum class Outcome { pass, fail, vacuous_pass };
  Outcome outcome = Outcome::pass;
  /// For fail: the variable kept free and the values substituted for the others.
  std::string free_variable;
  std::vector<std::string> specialization;
  std::string detail;
};

/// Randomized squarefreeness check. Each trial keeps one variable free
/// (cycling through the variables that occur), substitutes uniform integers
/// from [-range, range] for the others and tests the univariate result for a
/// repeated factor over Q. A failure is reported only after three further
/// specializations of the same variable agree, together with the witness.
SquarefreeCheck heuristic_squarefree_check(const ZPoly& f, unsigned trials, std::uint64_t seed,
                                           unsigned range = 1000);
/// Same check over F_q[t]: the other variables take random values of degree
/// <= max_degree and the univariate test runs over F_q(t), which accounts for
/// inseparable factors through the t-derivative.
SquarefreeCheck heuristic_squarefree_check(const APoly& f, unsigned trials, std::uint64_t seed,
                                           unsigned max_degree = 3);

struct CommonFactorCheck {
  bool common = false;
  std::string free_variable;
  std::vector<std::string> specialization;
  std::string detail;
};

/// Randomized test for a nonconstant common factor of f and g (same variable
/// list): specializes all but one shared variable and takes the univariate
/// gcd over the fraction field, confirming a hit three more times.
CommonFactorCheck heuristic_common_factor_check(const ZPoly& f, const ZPoly& g, unsigned trials,
                                               std::uint64_t seed, unsigned range = 1000);
CommonFactorCheck heuristic_common_factor_check(const APoly& f, const APoly& g, unsigned trials,
                                               std::uint64_t seed, unsigned max_degree = 3);

}  // namespace sqd
