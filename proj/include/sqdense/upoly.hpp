#pragma once

// Univariate polynomials over a gcd domain D (Z or F_q[t]), with primitive
// gcd via pseudo-remainders. Coefficients low to high, no trailing zeros.

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "sqdense/arith.hpp"
#include "sqdense/error.hpp"

namespace sqd {

template <class D>
struct UPoly {
  using Elem = typename D::Elem;
  std::vector<Elem> c;

  int degree() const noexcept { return static_cast<int>(c.size()) - 1; }
  bool is_zero() const noexcept { return c.empty(); }
  const Elem& lead() const { return c.back(); }
  friend bool operator==(const UPoly&, const UPoly&) = default;
};

template <class D>
class UPolyOps {
 public:
  using Elem = typename D::Elem;
  using P = UPoly<D>;

  explicit UPolyOps(D dom) : d_(std::move(dom)) {}
  const D& domain() const noexcept { return d_; }

  void trim(P& a) const {
    while (!a.c.empty() && d_.is_zero(a.c.back())) a.c.pop_back();
  }
  P make(std::vector<Elem> coeffs) const {
    P out{std::move(coeffs)};
    trim(out);
    return out;
  }

  P add(const P& a, const P& b) const {
    P out;
    out.c.resize(std::max(a.c.size(), b.c.size()), d_.zero());
    for (std::size_t i = 0; i < a.c.size(); ++i) out.c[i] = a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) out.c[i] = d_.add(out.c[i], b.c[i]);
    trim(out);
    return out;
  }
  P sub(const P& a, const P& b) const {
    P nb = b;
    for (auto& x : nb.c) x = d_.neg(x);
    return add(a, nb);
  }
  P mul(const P& a, const P& b) const {
    if (a.is_zero() || b.is_zero()) return {};
    P out;
    out.c.assign(a.c.size() + b.c.size() - 1, d_.zero());
    for (std::size_t i = 0; i < a.c.size(); ++i) {
      for (std::size_t j = 0; j < b.c.size(); ++j) out.c[i + j] = d_.add(out.c[i + j], d_.mul(a.c[i], b.c[j]));
    }
    trim(out);
    return out;
  }
  P scale(const P& a, const Elem& s) const {
    P out = a;
    for (auto& x : out.c) x = d_.mul(x, s);
    trim(out);
    return out;
  }
  P pow(const P& a, unsigned k) const {
    P result = make({d_.one()}), base = a;
    while (k) {
      if (k & 1) result = mul(result, base);
      k >>= 1;
      if (k) base = mul(base, base);
    }
    return result;
  }

  /// d/dx.
  P derivative(const P& a) const {
    P out;
    for (std::size_t i = 1; i < a.c.size(); ++i) out.c.push_back(d_.mul(d_.from_int(Int(i)), a.c[i]));
    trim(out);
    return out;
  }

  Elem evaluate(const P& a, const Elem& x) const {
    Elem acc = d_.zero();
    for (std::size_t i = a.c.size(); i-- > 0;) acc = d_.add(d_.mul(acc, x), a.c[i]);
    return acc;
  }

  /// Normalized gcd of the coefficients (zero for the zero polynomial).
  Elem content(const P& a) const {
    Elem g = d_.zero();
    for (const auto& x : a.c) g = d_.gcd(g, x);
    return g;
  }

  /// a divided by its content and by the unit making the leading coefficient normal.
  P primitive(const P& a) const {
    if (a.is_zero()) return a;
    const Elem g = content(a);
    P out;
    for (const auto& x : a.c) out.c.push_back(d_.divexact(x, g));
    const Elem u = d_.unit_part(out.lead());
    if (!d_.is_one(u)) {
      for (auto& x : out.c) x = d_.divexact(x, u);
    }
    return out;
  }

  /// lc(b)^(deg a - deg b + 1) * a  mod  b.
  P pseudo_rem(const P& a, const P& b) const {
    if (b.is_zero()) throw DomainError("pseudo_rem by zero polynomial");
    P r = a;
    const Elem lb = b.lead();
    while (!r.is_zero() && r.degree() >= b.degree()) {
      const Elem lr = r.lead();
      const std::size_t shift = static_cast<std::size_t>(r.degree() - b.degree());
      for (auto& x : r.c) x = d_.mul(x, lb);
      for (std::size_t i = 0; i < b.c.size(); ++i) r.c[shift + i] = d_.sub(r.c[shift + i], d_.mul(lr, b.c[i]));
      trim(r);
    }
    return r;
  }

  /// Exact quotient a / b; throws DomainError if b does not divide a over D.
  P divexact(const P& a, const P& b) const {
    if (b.is_zero()) throw DomainError("division by zero polynomial");
    P r = a;
    if (r.degree() < b.degree()) {
      if (!r.is_zero()) throw DomainError("inexact polynomial division");
      return {};
    }
    P quot;
    quot.c.assign(static_cast<std::size_t>(r.degree() - b.degree() + 1), d_.zero());
    while (!r.is_zero() && r.degree() >= b.degree()) {
      const std::size_t shift = static_cast<std::size_t>(r.degree() - b.degree());
      const Elem f = d_.divexact(r.lead(), b.lead());
      quot.c[shift] = f;
      for (std::size_t i = 0; i < b.c.size(); ++i) r.c[shift + i] = d_.sub(r.c[shift + i], d_.mul(f, b.c[i]));
      trim(r);
    }
    if (!r.is_zero()) throw DomainError("inexact polynomial division");
    trim(quot);
    return quot;
  }

  /// Primitive normalized gcd over the fraction field of D (content ignored).
  P gcd(const P& a, const P& b) const {
    if (a.is_zero()) return primitive(b);
    if (b.is_zero()) return primitive(a);
    P x = primitive(a), y = primitive(b);
    if (x.degree() < y.degree()) std::swap(x, y);
    while (!y.is_zero()) {
      P r = pseudo_rem(x, y);
      x = std::move(y);
      y = primitive(r);
    }
    return primitive(x);
  }

 private:
  D d_;
};

}  // namespace sqd
