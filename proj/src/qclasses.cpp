#include "sqdense/qclasses.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "sqdense/upoly.hpp"

namespace sqd {

namespace {

using ZU = UPoly<IntegerRing>;

std::size_t univariate_var(const ZPoly& f, const char* what) {
  if (f.arity() > 1) throw DomainError(std::string(what) + ": polynomial must be univariate");
  return 0;
}

ZU to_upoly(const ZPoly& f) {
  ZU out;
  if (f.arity() == 0) {
    if (!f.is_zero()) out.c.push_back(f.coefficient({}));
    return out;
  }
  out.c.assign(f.degree_in(0) + 1, 0);
  for (const auto& [e, c] : f.terms()) out.c[e[0]] = c;
  while (!out.c.empty() && out.c.back() == 0) out.c.pop_back();
  return out;
}

ZPoly from_upoly(const ZU& u, const std::vector<std::string>& vars) {
  ZPoly out(IntegerRing{}, vars);
  for (std::size_t i = 0; i < u.c.size(); ++i) {
    Exponents e(vars.size(), 0);
    if (!vars.empty()) {
      e[0] = static_cast<unsigned>(i);
    } else if (i > 0) {
      throw InternalError("nonconstant polynomial without a variable");
    }
    out.add_term(std::move(e), u.c[i]);
  }
  return out;
}

// Yun's algorithm on a primitive polynomial: returns a_1, a_2, ... with
// f = prod a_i^i, each a_i primitive with positive leading coefficient.
std::vector<ZU> yun(const UPolyOps<IntegerRing>& ops, const ZU& f) {
  std::vector<ZU> out;
  if (f.degree() <= 0) return out;
  const ZU df = ops.derivative(f);
  const ZU a0 = ops.gcd(f, df);
  ZU b = ops.divexact(f, a0);
  ZU c = ops.divexact(df, a0);
  ZU d = ops.sub(c, ops.derivative(b));
  while (b.degree() > 0) {
    const ZU a = ops.gcd(b, d);
    out.push_back(a);
    b = ops.divexact(b, a);
    c = ops.divexact(d, a);
    d = ops.sub(c, ops.derivative(b));
  }
  return out;
}

// Signed squarefree kernel of v; 0 stays 0.
std::int64_t kernel_i64(std::int64_t v) {
  if (v == 0) return 0;
  const std::uint64_t mag = v < 0 ? 0 - static_cast<std::uint64_t>(v) : static_cast<std::uint64_t>(v);
  const auto k = static_cast<std::int64_t>(squarefree_split_u64(mag).first);
  return v < 0 ? -k : k;
}

Int kernel_int(const Int& v) {
  if (v == 0) return 0;
  return squarefree_split(v).kernel;
}

// Whether |f(x)| < 2^62 for all 1 <= x <= B.
bool fits_machine(const ZU& f, std::uint64_t B) {
  Int bound = 0, pw = 1;
  for (const auto& c : f.c) {
    if (!c.fits_slong_p()) return false;
    bound += abs(c) * pw;
    pw *= Int(std::to_string(B));
  }
  return bound < (Int(1) << 62);
}

std::int64_t eval_i64(const ZU& f, const std::vector<std::int64_t>& coeffs, std::int64_t x) {
  __int128 acc = 0;
  for (std::size_t i = f.c.size(); i-- > 0;) acc = acc * x + coeffs[i];
  return static_cast<std::int64_t>(acc);
}

}  // namespace

SquarefreeDecomposition squarefree_decompose(const ZPoly& f) {
  univariate_var(f, "squarefree_decompose");
  if (f.is_zero()) throw DomainError("squarefree_decompose: zero polynomial");
  const UPolyOps<IntegerRing> ops{IntegerRing{}};
  const ZU u = to_upoly(f);
  const ZU pp = ops.primitive(u);
  Int c = ops.content(u);
  if (u.lead() < 0) c = -c;

  ZU g{{Int(1)}}, h{{Int(1)}};
  const auto parts = yun(ops, pp);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const unsigned mult = static_cast<unsigned>(i + 1);
    if (parts[i].degree() <= 0) continue;
    g = ops.mul(g, ops.pow(parts[i], mult / 2));
    if (mult % 2) h = ops.mul(h, parts[i]);
  }
  return {c, from_upoly(g, f.variables()), from_upoly(h, f.variables())};
}

Rational DeltaTable::sum() const {
  Rational s = 0;
  for (const auto& d : delta) s += d;
  return s;
}

DeltaTable delta_table(std::uint64_t a, const Int& b) {
  if (a == 0) throw DomainError("delta_table: a must be positive");
  DeltaTable out;
  out.a = a;
  out.b = b;
  out.delta.assign(a, Rational(0));
  out.witness.assign(a, std::nullopt);
  Int br;
  mpz_fdiv_r_ui(br.get_mpz_t(), b.get_mpz_t(), a);
  const std::uint64_t target = br.get_ui();
  for (std::uint64_t r = 0; r < a; ++r) {
    for (std::uint64_t m = 1; m <= a; ++m) {
      const std::uint64_t m2 = mulmod_u64(m % a, m % a, a);
      if (mulmod_u64(m2, r, a) == target % a) {
        out.witness[r] = m;
        out.delta[r] = Rational(1, Int(std::to_string(m * m)));
        break;
      }
    }
  }
  return out;
}

CfConstant c_f_constant(const ZPoly& f) {
  const auto dec = squarefree_decompose(f);
  CfConstant out;
  out.deg_h = dec.h.total_degree();
  if (out.deg_h == 0) return out;
  if (out.deg_h >= 2) {
    out.value = 1;
    return out;
  }
  const Int a = abs(dec.h.coefficient({1}));
  const Int b = dec.h.coefficient({0});
  if (!a.fits_ulong_p()) throw BudgetError("c_f_constant: leading coefficient too large for the residue scan");
  const DeltaTable table = delta_table(a.get_ui(), b);
  Rational factor = 6 * table.sum();
  for (const auto& pp : factorize(a).prime_powers) {
    const Int p2 = pp.prime * pp.prime;
    factor *= Rational(p2, p2 - 1);
  }
  factor.canonicalize();
  out.over_pi_squared = factor;
  out.value = factor.get_d() / (std::numbers::pi * std::numbers::pi);
  return out;
}

ImageCount image_count(const ZPoly& f, std::uint64_t B, std::uint64_t prefix_step) {
  univariate_var(f, "image_count");
  if (B == 0) throw DomainError("image_count: B must be positive");
  const ZU u = to_upoly(f);
  ImageCount out;
  out.bound = B;
  std::uint64_t distinct = 0;
  auto record = [&](std::uint64_t n) {
    if (prefix_step && (n % prefix_step == 0 || n == B)) {
      out.per_prefix.push_back({n, distinct, static_cast<double>(distinct) / static_cast<double>(n)});
    }
  };
  if (fits_machine(u, B)) {
    std::vector<std::int64_t> coeffs;
    for (const auto& c : u.c) coeffs.push_back(c.get_si());
    std::unordered_set<std::int64_t> seen;
    seen.reserve(B);
    for (std::uint64_t n = 1; n <= B; ++n) {
      const std::int64_t v = u.c.empty() ? 0 : eval_i64(u, coeffs, static_cast<std::int64_t>(n));
      if (seen.insert(kernel_i64(v)).second) ++distinct;
      record(n);
    }
  } else {
    const UPolyOps<IntegerRing> ops{IntegerRing{}};
    std::set<Int> seen;
    for (std::uint64_t n = 1; n <= B; ++n) {
      if (seen.insert(kernel_int(ops.evaluate(u, Int(std::to_string(n))))).second) ++distinct;
      record(n);
    }
  }
  out.distinct = distinct;
  out.ratio = static_cast<double>(distinct) / static_cast<double>(B);
  return out;
}

std::uint64_t collision_count(const ZPoly& f, const Rational& q_in, std::uint64_t B) {
  univariate_var(f, "collision_count");
  Rational q = q_in;
  q.canonicalize();
  if (q == 0) throw DomainError("collision_count: q must be nonzero");
  if (q == 1) throw DomainError("collision_count: q must differ from 1");
  const ZU u = to_upoly(f);
  if (u.degree() < 2) throw PreconditionError("collision_count: f must have degree at least 2");
  const UPolyOps<IntegerRing> ops{IntegerRing{}};
  if (ops.gcd(u, ops.derivative(u)).degree() > 0) {
    throw PreconditionError("collision_count: f has a repeated factor (zero discriminant)");
  }
  // den * f(m) = num * f(n): index the values f(m), then look up each target.
  const Int num = q.get_num(), den = q.get_den();
  std::map<Int, std::vector<std::uint64_t>> values;
  std::vector<Int> fv(B + 1);
  for (std::uint64_t m = 1; m <= B; ++m) {
    fv[m] = ops.evaluate(u, Int(std::to_string(m)));
    values[fv[m]].push_back(m);
  }
  std::uint64_t count = 0;
  for (std::uint64_t n = 1; n <= B; ++n) {
    const Int scaled = num * fv[n];
    if (!mpz_divisible_p(scaled.get_mpz_t(), den.get_mpz_t())) continue;
    Int target;
    mpz_divexact(target.get_mpz_t(), scaled.get_mpz_t(), den.get_mpz_t());
    auto it = values.find(target);
    if (it != values.end()) count += it->second.size();
  }
  return count;
}

}  // namespace sqd
