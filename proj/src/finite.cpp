#include "sqdense/finite.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "expr_parse.hpp"
#include "sqdense/error.hpp"

namespace sqd {

namespace {

// Dense polynomials over F_p (low to high), used only to build extension fields.
using PpPoly = std::vector<std::uint32_t>;

void pp_trim(PpPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

PpPoly pp_rem(PpPoly a, const PpPoly& m, std::uint32_t p) {
  pp_trim(a);
  const std::uint32_t lead_inv = static_cast<std::uint32_t>(powmod_u64(m.back(), p - 2, p));
  while (a.size() >= m.size()) {
    const std::uint64_t f = std::uint64_t{a.back()} * lead_inv % p;
    const std::size_t shift = a.size() - m.size();
    for (std::size_t i = 0; i < m.size(); ++i) {
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - f * m[i] % p) % p);
    }
    pp_trim(a);
  }
  return a;
}

PpPoly pp_from_index(std::uint64_t idx, std::uint32_t p, std::size_t len) {
  PpPoly out(len, 0);
  for (std::size_t i = 0; i < len; ++i) {
    out[i] = static_cast<std::uint32_t>(idx % p);
    idx /= p;
  }
  return out;
}

bool pp_irreducible(const PpPoly& f, std::uint32_t p) {
  const std::size_t deg = f.size() - 1;
  for (std::size_t d = 1; d <= deg / 2; ++d) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < d; ++i) count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      PpPoly g = pp_from_index(idx, p, d);
      g.push_back(1);
      if (pp_rem(f, g, p).empty()) return false;
    }
  }
  return true;
}

}  // namespace

std::pair<std::uint32_t, std::uint32_t> prime_power_split(std::uint64_t q) {
  if (q < 2) return {0, 0};
  std::uint64_t p = 0;
  for (std::uint64_t d = 2; d * d <= q; ++d) {
    if (q % d == 0) {
      p = d;
      break;
    }
  }
  if (p == 0) p = q;
  std::uint32_t e = 0;
  while (q % p == 0) {
    q /= p;
    ++e;
  }
  if (q != 1) return {0, 0};
  return {static_cast<std::uint32_t>(p), e};
}

std::shared_ptr<const Fq> Fq::make(std::uint32_t q, std::uint32_t max_order) {
  const auto [p, e] = prime_power_split(q);
  if (p == 0) throw DomainError("field order " + std::to_string(q) + " is not a prime power");
  if (e > 1 && q > max_order) {
    throw BudgetError("extension field order " + std::to_string(q) + " exceeds cap " + std::to_string(max_order));
  }
  if (e == 1 && q > kMaxPrimeField) {
    throw BudgetError("prime field order " + std::to_string(q) + " exceeds cap " + std::to_string(kMaxPrimeField));
  }

  // Fields are immutable, so identical requests share one instance.
  static std::mutex mu;
  static std::map<std::uint32_t, std::shared_ptr<const Fq>> cache;
  std::lock_guard lock(mu);
  if (auto it = cache.find(q); it != cache.end()) return it->second;

  auto f = std::shared_ptr<Fq>(new Fq());
  f->p_ = p;
  f->e_ = e;
  f->q_ = q;
  if (e == 1) {
    f->modulus_ = {0, 1};
  } else {
    for (std::uint64_t idx = 0;; ++idx) {
      PpPoly cand = pp_from_index(idx, p, e);
      cand.push_back(1);
      if (pp_irreducible(cand, p)) {
        f->modulus_ = cand;
        break;
      }
    }
  }

  f->add_.resize(std::size_t{q} * q);
  f->mul_.resize(std::size_t{q} * q);
  f->neg_.resize(q);
  f->inv_.assign(q, 0);
  for (std::uint32_t a = 0; a < q; ++a) {
    const PpPoly da = pp_from_index(a, p, e);
    PpPoly dn(e);
    for (std::uint32_t i = 0; i < e; ++i) dn[i] = (p - da[i]) % p;
    std::uint32_t neg = 0;
    for (std::uint32_t i = e; i-- > 0;) neg = neg * p + dn[i];
    f->neg_[a] = neg;
    for (std::uint32_t b = 0; b < q; ++b) {
      const PpPoly db = pp_from_index(b, p, e);
      std::uint32_t sum = 0;
      for (std::uint32_t i = e; i-- > 0;) sum = sum * p + (da[i] + db[i]) % p;
      f->add_[a * q + b] = sum;
      PpPoly prod(2 * e, 0);
      for (std::uint32_t i = 0; i < e; ++i) {
        for (std::uint32_t j = 0; j < e; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
      }
      prod = e == 1 ? PpPoly{prod[0]} : pp_rem(prod, f->modulus_, p);
      std::uint32_t packed = 0;
      for (std::size_t i = prod.size(); i-- > 0;) packed = packed * p + prod[i];
      f->mul_[a * q + b] = packed;
      if (packed == 1) f->inv_[a] = b;
    }
  }
  cache.emplace(q, f);
  return f;
}

Fq::Elem Fq::inv(Elem a) const {
  if (a == 0) throw DomainError("inverse of zero in F_" + std::to_string(q_));
  return inv_[a];
}

Fq::Elem Fq::from_int(const Int& n) const {
  Int r = n % p_;
  if (r < 0) r += p_;
  return static_cast<Elem>(r.get_ui());
}

std::vector<std::uint32_t> Fq::digits(Elem a) const { return pp_from_index(a, p_, e_); }

Fq::Elem Fq::from_digits(const std::vector<std::uint32_t>& digits) const {
  if (digits.size() > e_) throw DomainError("tuple has more than " + std::to_string(e_) + " entries");
  Elem out = 0;
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (digits[i] >= p_) throw DomainError("tuple entry " + std::to_string(digits[i]) + " is not below p");
    out = out * p_ + digits[i];
  }
  return out;
}

std::string Fq::render(Elem a) const {
  if (in_prime_field(a)) return std::to_string(a);
  std::string out = "[";
  const auto d = digits(a);
  std::size_t len = d.size();
  while (len > 1 && d[len - 1] == 0) --len;
  for (std::size_t i = 0; i < len; ++i) {
    if (i) out += ",";
    out += std::to_string(d[i]);
  }
  return out + "]";
}

FqPoly FqPoly::monomial(Fq::Elem a, std::size_t k) {
  FqPoly out;
  if (a == 0) return out;
  out.c.assign(k + 1, 0);
  out.c[k] = a;
  return out;
}

FqtRing::FqtRing(std::shared_ptr<const Fq> field) : field_(std::move(field)) {
  if (!field_) throw DomainError("FqtRing requires a field");
}

FqPoly FqtRing::add(const FqPoly& a, const FqPoly& b) const {
  FqPoly out;
  out.c.resize(std::max(a.c.size(), b.c.size()));
  for (std::size_t i = 0; i < out.c.size(); ++i) out.c[i] = field_->add(a.coeff(i), b.coeff(i));
  out.trim();
  return out;
}

FqPoly FqtRing::sub(const FqPoly& a, const FqPoly& b) const {
  FqPoly out;
  out.c.resize(std::max(a.c.size(), b.c.size()));
  for (std::size_t i = 0; i < out.c.size(); ++i) out.c[i] = field_->sub(a.coeff(i), b.coeff(i));
  out.trim();
  return out;
}

FqPoly FqtRing::neg(const FqPoly& a) const {
  FqPoly out = a;
  for (auto& x : out.c) x = field_->neg(x);
  return out;
}

FqPoly FqtRing::mul(const FqPoly& a, const FqPoly& b) const {
  if (a.is_zero() || b.is_zero()) return {};
  FqPoly out;
  out.c.assign(a.c.size() + b.c.size() - 1, 0);
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    for (std::size_t j = 0; j < b.c.size(); ++j) {
      out.c[i + j] = field_->add(out.c[i + j], field_->mul(a.c[i], b.c[j]));
    }
  }
  out.trim();
  return out;
}

FqPoly FqtRing::scale(const FqPoly& a, Fq::Elem s) const {
  if (s == 0) return {};
  FqPoly out = a;
  for (auto& x : out.c) x = field_->mul(x, s);
  out.trim();
  return out;
}

std::pair<FqPoly, FqPoly> FqtRing::divrem(const FqPoly& a, const FqPoly& b) const {
  if (b.is_zero()) throw DomainError("division by the zero polynomial");
  FqPoly r = a;
  if (r.degree() < b.degree()) return {FqPoly{}, r};
  FqPoly quot;
  quot.c.assign(r.c.size() - b.c.size() + 1, 0);
  const Fq::Elem lead_inv = field_->inv(b.lead());
  while (!r.is_zero() && r.degree() >= b.degree()) {
    const std::size_t shift = r.c.size() - b.c.size();
    const Fq::Elem f = field_->mul(r.lead(), lead_inv);
    quot.c[shift] = f;
    for (std::size_t i = 0; i < b.c.size(); ++i) {
      r.c[shift + i] = field_->sub(r.c[shift + i], field_->mul(f, b.c[i]));
    }
    r.trim();
  }
  quot.trim();
  return {quot, r};
}

FqPoly FqtRing::monic(const FqPoly& a) const {
  if (a.is_zero()) return a;
  return scale(a, field_->inv(a.lead()));
}

FqPoly FqtRing::divexact(const FqPoly& a, const FqPoly& b) const {
  auto [quot, r] = divrem(a, b);
  if (!r.is_zero()) throw DomainError("inexact division in F_q[t]");
  return quot;
}

FqPoly FqtRing::gcd(const FqPoly& a, const FqPoly& b) const {
  FqPoly x = a, y = b;
  while (!y.is_zero()) {
    FqPoly r = rem(x, y);
    x = std::move(y);
    y = std::move(r);
  }
  return monic(x);
}

FqPoly FqtRing::pow(const FqPoly& a, std::uint64_t e) const {
  FqPoly result = one(), base = a;
  while (e) {
    if (e & 1) result = mul(result, base);
    e >>= 1;
    if (e) base = mul(base, base);
  }
  return result;
}

FqPoly FqtRing::powmod(const FqPoly& a, const Int& e, const FqPoly& m) const {
  FqPoly result = rem(one(), m), base = rem(a, m);
  const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    result = rem(mul(result, result), m);
    if (mpz_tstbit(e.get_mpz_t(), i)) result = rem(mul(result, base), m);
  }
  return result;
}

FqPoly FqtRing::derivative(const FqPoly& a) const {
  if (a.c.size() <= 1) return {};
  FqPoly out;
  out.c.resize(a.c.size() - 1);
  for (std::size_t i = 1; i < a.c.size(); ++i) {
    out.c[i - 1] = field_->mul(field_->from_int(static_cast<long>(i % field_->p())), a.c[i]);
  }
  out.trim();
  return out;
}

bool FqtRing::is_squarefree(const FqPoly& a) const {
  if (a.is_zero()) throw DomainError("is_squarefree: zero polynomial");
  if (a.degree() == 0) return true;
  return gcd(a, derivative(a)).degree() == 0;
}

bool FqtRing::is_irreducible(const FqPoly& a) const {
  if (a.degree() < 1) throw DomainError("is_irreducible: polynomial must be nonconstant");
  const FqPoly f = monic(a);
  const unsigned n = static_cast<unsigned>(f.degree());
  if (n == 1) return true;
  const Int q = field_->q();
  // frob[k] = t^{q^k} mod f
  std::vector<FqPoly> frob{rem(t(), f)};
  for (unsigned k = 1; k <= n; ++k) frob.push_back(powmod(frob.back(), q, f));
  if (sub(frob[n], rem(t(), f)) != FqPoly{}) return false;
  for (const auto& pp : factorize(Int(n)).prime_powers) {
    const unsigned r = static_cast<unsigned>(pp.prime.get_ui());
    if (gcd(sub(frob[n / r], t()), f).degree() != 0) return false;
  }
  return true;
}

Int FqtRing::norm(const FqPoly& a) const {
  if (a.is_zero()) return 0;
  Int out;
  mpz_ui_pow_ui(out.get_mpz_t(), field_->q(), static_cast<unsigned long>(a.degree()));
  return out;
}

std::uint64_t FqtRing::index_of(const FqPoly& a) const {
  std::uint64_t idx = 0;
  for (std::size_t i = a.c.size(); i-- > 0;) idx = idx * field_->q() + a.c[i];
  return idx;
}

FqPoly FqtRing::from_index(std::uint64_t idx) const {
  FqPoly out;
  while (idx) {
    out.c.push_back(static_cast<Fq::Elem>(idx % field_->q()));
    idx /= field_->q();
  }
  return out;
}

std::string FqtRing::render(const FqPoly& a) const {
  if (a.is_zero()) return "0";
  std::string out;
  for (std::size_t i = a.c.size(); i-- > 0;) {
    if (a.c[i] == 0) continue;
    if (!out.empty()) out += "+";
    const std::string coef = field_->render(a.c[i]);
    if (i == 0) {
      out += coef;
      continue;
    }
    if (a.c[i] != 1) out += coef + "*";
    out += "t";
    if (i > 1) out += "^" + std::to_string(i);
  }
  return out;
}

namespace {

struct FqPolyBuilder {
  using Value = FqPoly;
  const FqtRing& ring;

  Value from_int(const Int& n, detail::SourcePos) const { return ring.from_int(n); }
  Value from_tuple(const std::vector<std::uint32_t>& d, detail::SourcePos pos) const {
    try {
      return FqPoly::constant(ring.field().from_digits(d));
    } catch (const DomainError& e) {
      throw ParseError(std::string("coefficient not in ring: ") + e.what(), pos.line, pos.column);
    }
  }
  Value from_identifier(std::string_view name, detail::SourcePos pos) const {
    if (name != "t") throw ParseError("unknown symbol '" + std::string(name) + "'", pos.line, pos.column);
    return ring.t();
  }
  Value add(const Value& a, const Value& b) const { return ring.add(a, b); }
  Value sub(const Value& a, const Value& b) const { return ring.sub(a, b); }
  Value neg(const Value& a) const { return ring.neg(a); }
  Value mul(const Value& a, const Value& b) const { return ring.mul(a, b); }
  Value pow(const Value& a, unsigned e) const { return ring.pow(a, e); }
};

}  // namespace

FqPoly FqtRing::parse(std::string_view text) const {
  FqPolyBuilder b{*this};
  return detail::parse_expression(text, b);
}

PrimeA::PrimeA(const FqtRing& ring, FqPoly pi) : pi_(std::move(pi)) {
  if (pi_.degree() < 1 || pi_.lead() != 1) throw DomainError("prime generator must be monic and nonconstant");
  if (!ring.is_irreducible(pi_)) throw DomainError(ring.render(pi_) + " is not irreducible");
  norm_ = 1;
  for (int i = 0; i < pi_.degree(); ++i) norm_ *= ring.q();
}

Int necklace_count(std::uint64_t q, unsigned d) {
  if (d == 0) throw DomainError("necklace_count: degree must be >= 1");
  Int total = 0;
  for (unsigned e = 1; e <= d; ++e) {
    if (d % e) continue;
    Int term;
    mpz_ui_pow_ui(term.get_mpz_t(), q, d / e);
    total += moebius(e) * term;
  }
  return total / d;
}

std::vector<PrimeA> irreducibles_of_degree(const FqtRing& ring, unsigned d, std::uint64_t budget) {
  if (d == 0) throw DomainError("irreducibles_of_degree: degree must be >= 1");
  Int count_i;
  mpz_ui_pow_ui(count_i.get_mpz_t(), ring.q(), d);
  if (count_i > budget) {
    throw BudgetError("enumerating " + count_i.get_str() + " monic polynomials of degree " + std::to_string(d) +
                      " exceeds budget");
  }
  const std::uint64_t count = count_i.get_ui();
  std::vector<PrimeA> out;
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    FqPoly cand = ring.from_index(idx);
    cand.c.resize(d + 1, 0);
    cand.c[d] = 1;
    if (ring.is_irreducible(cand)) out.emplace_back(ring, std::move(cand));
  }
  return out;
}

ResidueEnumerator::ResidueEnumerator(const FqtRing& ring, const PrimeA& pi, unsigned power, unsigned arity,
                                     std::uint64_t budget)
    : ring_(ring), pi_(pi.pi()), power_(power), arity_(arity), digit_size_(pi.norm()) {
  if (power == 0) throw DomainError("ResidueEnumerator: power must be >= 1");
  Int per = 1, total = 1;
  for (unsigned i = 0; i < power; ++i) per *= digit_size_;
  for (unsigned i = 0; i < arity; ++i) total *= per;
  if (total > budget) {
    throw BudgetError("residue enumeration of size " + total.get_str() + " exceeds budget " + std::to_string(budget));
  }
  per_coord_ = per.get_ui();
  total_ = total.get_ui();
}

FqPoly ResidueEnumerator::coordinate(std::uint64_t index) const {
  FqPoly value, pi_pow = ring_.one();
  for (unsigned j = 0; j < power_; ++j) {
    const FqPoly digit = ring_.from_index(index % digit_size_);
    index /= digit_size_;
    value = ring_.add(value, ring_.mul(digit, pi_pow));
    pi_pow = ring_.mul(pi_pow, pi_);
  }
  return value;
}

void ResidueEnumerator::decode(std::uint64_t index, std::vector<FqPoly>& out) const {
  out.resize(arity_);
  for (unsigned i = 0; i < arity_; ++i) {
    out[i] = coordinate(index % per_coord_);
    index /= per_coord_;
  }
}

}  // namespace sqd
