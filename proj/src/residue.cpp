#include "sqdense/residue.hpp"

#include <string>

namespace sqd {

ZmodRing::ZmodRing(std::uint64_t m) : m_(m) {
  if (m < 2 || m > 0xffffffffULL) throw DomainError("Z/m needs 2 <= m < 2^32, got " + std::to_string(m));
}

ZmodRing::Elem ZmodRing::from_int(const Int& n) const {
  Int r;
  mpz_fdiv_r_ui(r.get_mpz_t(), n.get_mpz_t(), m_);
  return r.get_ui();
}

AResidueRing::AResidueRing(const FqtRing& ring, const FqPoly& modulus, std::uint64_t work_hint)
    : ring_(ring), modulus_(ring.monic(modulus)), q_(ring.q()) {
  if (modulus_.degree() < 1) throw DomainError("residue ring needs a nonconstant modulus");
  m_ = static_cast<std::uint32_t>(modulus_.degree());
  for (std::uint32_t k = 0; k < m_; ++k) mod_digits_.push_back(modulus_.coeff(k));
  std::uint64_t n = 1;
  for (std::uint32_t i = 0; i < m_; ++i) {
    n *= q_;
    if (n >= (std::uint64_t{1} << 31)) {
      throw BudgetError("residue ring of order " + std::to_string(q_) + "^" + std::to_string(m_) + " is too large");
    }
  }
  n_ = static_cast<std::uint32_t>(n);
  field_ = ring_.is_irreducible(modulus_);

  if (q_ != 2 && n_ <= kLogLimit && n_ <= work_hint) {
    neg_.resize(n_);
    for (Elem a = 0; a < n_; ++a) neg_[a] = slow_neg(a);
  }

  if (n_ <= kTableLimit && std::uint64_t{n_} * n_ / 4 <= work_hint) {
    add_.resize(std::size_t{n_} * n_);
    for (Elem a = 0; a < n_; ++a) {
      for (Elem b = 0; b < n_; ++b) add_[std::size_t{a} * n_ + b] = static_cast<std::uint16_t>(slow_add(a, b));
    }
    // Row a of the product table is F_q-linear in b: peel off the top digit
    // of b and reuse the row entry for the rest.
    std::vector<Elem> top_rest(n_), top_pos(n_), top_digit(n_);
    std::vector<std::uint64_t> qpow(m_ + 1, 1);
    for (std::uint32_t i = 1; i <= m_; ++i) qpow[i] = qpow[i - 1] * q_;
    for (Elem b = 1; b < n_; ++b) {
      std::uint32_t j = 0;
      while (qpow[j + 1] <= b) ++j;
      top_pos[b] = j;
      top_digit[b] = static_cast<Elem>(b / qpow[j]);
      top_rest[b] = static_cast<Elem>(b % qpow[j]);
    }
    const Fq& F = ring_.field();
    mul_.assign(std::size_t{n_} * n_, 0);
    std::vector<Elem> basis(m_);
    for (Elem a = 0; a < n_; ++a) {
      basis[0] = a;
      for (std::uint32_t j = 1; j < m_; ++j) basis[j] = slow_mul(basis[j - 1], static_cast<Elem>(q_));
      std::uint16_t* row = &mul_[std::size_t{a} * n_];
      for (Elem b = 1; b < n_; ++b) {
        auto d = digits(basis[top_pos[b]]);
        for (auto& x : d) x = F.mul(x, top_digit[b]);
        row[b] = static_cast<std::uint16_t>(add(row[top_rest[b]], from_digits(d)));
      }
    }
  } else if (field_ && n_ <= kLogLimit && n_ <= work_hint / 8) {
    log_.assign(n_, 0);
    exp_.assign(n_ - 1, 0);
    for (Elem g = 2;; ++g) {
      if (g >= n_) throw InternalError("no primitive element found");
      Elem x = 1;
      bool primitive = true;
      for (std::uint32_t i = 0; i < n_ - 1; ++i) {
        if (i > 0 && x == 1) {
          primitive = false;
          break;
        }
        exp_[i] = x;
        x = slow_mul(x, g);
      }
      if (primitive && x == 1) break;
    }
    for (std::uint32_t i = 0; i < n_ - 1; ++i) log_[exp_[i]] = i;
  }
}

std::vector<std::uint32_t> AResidueRing::digits(std::uint64_t a) const {
  std::vector<std::uint32_t> d(m_, 0);
  for (std::uint32_t i = 0; i < m_ && a; ++i) {
    d[i] = static_cast<std::uint32_t>(a % q_);
    a /= q_;
  }
  return d;
}

AResidueRing::Elem AResidueRing::from_digits(const std::vector<std::uint32_t>& d) const {
  std::uint64_t idx = 0;
  for (std::size_t i = d.size(); i-- > 0;) idx = idx * q_ + d[i];
  return static_cast<Elem>(idx);
}

AResidueRing::Elem AResidueRing::slow_add(Elem a, Elem b) const {
  const Fq& F = ring_.field();
  std::uint64_t out = 0, scale = 1;
  while (a || b) {
    out += scale * F.add(a % q_, b % q_);
    a /= q_;
    b /= q_;
    scale *= q_;
  }
  return static_cast<Elem>(out);
}

AResidueRing::Elem AResidueRing::slow_neg(Elem a) const {
  const Fq& F = ring_.field();
  std::uint64_t out = 0, scale = 1;
  while (a) {
    out += scale * F.neg(a % q_);
    a /= q_;
    scale *= q_;
  }
  return static_cast<Elem>(out);
}

AResidueRing::Elem AResidueRing::slow_mul(Elem a, Elem b) const {
  const Fq& F = ring_.field();
  // m < 32 because q^m < 2^31.
  std::uint32_t da[32], db[32], prod[64] = {};
  for (std::uint32_t i = 0; i < m_; ++i) {
    da[i] = a % q_;
    a /= q_;
    db[i] = b % q_;
    b /= q_;
  }
  for (std::uint32_t i = 0; i < m_; ++i) {
    if (!da[i]) continue;
    for (std::uint32_t j = 0; j < m_; ++j) {
      if (db[j]) prod[i + j] = F.add(prod[i + j], F.mul(da[i], db[j]));
    }
  }
  for (std::uint32_t i = 2 * m_ - 1; i-- > m_;) {
    const std::uint32_t c = prod[i];
    if (!c) continue;
    for (std::uint32_t k = 0; k < m_; ++k) prod[i - m_ + k] = F.sub(prod[i - m_ + k], F.mul(c, mod_digits_[k]));
  }
  std::uint64_t idx = 0;
  for (std::uint32_t i = m_; i-- > 0;) idx = idx * q_ + prod[i];
  return static_cast<Elem>(idx);
}

AResidueRing::Elem AResidueRing::pow(Elem a, std::uint64_t e) const {
  Elem result = one(), base = a;
  while (e) {
    if (e & 1) result = mul(result, base);
    e >>= 1;
    if (e) base = mul(base, base);
  }
  return result;
}

AResidueRing::Elem AResidueRing::from_poly(const FqPoly& a) const {
  if (a.degree() < static_cast<int>(m_)) return static_cast<Elem>(ring_.index_of(a));
  return static_cast<Elem>(ring_.index_of(ring_.rem(a, modulus_)));
}

AResidueRing::Elem AResidueRing::reduce_index(std::uint64_t index) const {
  if (index < n_) return static_cast<Elem>(index);
  return from_poly(ring_.from_index(index));
}

CompiledPoly<ZmodRing> compile(const ZPoly& f, const ZmodRing& ring) {
  CompiledPoly<ZmodRing> out(ring, f.arity());
  for (const auto& [e, c] : f.terms()) out.add_term(e, ring.from_int(c));
  return out;
}

CompiledPoly<AResidueRing> compile(const APoly& f, const AResidueRing& ring) {
  if (!(f.ring() == ring.ring())) throw DomainError("compile: polynomial and residue ring differ");
  CompiledPoly<AResidueRing> out(ring, f.arity());
  for (const auto& [e, c] : f.terms()) out.add_term(e, ring.from_poly(c));
  return out;
}

}  // namespace sqd
