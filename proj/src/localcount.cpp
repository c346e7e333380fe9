#include "sqdense/localcount.hpp"

#include <optional>
#include <algorithm>
#include <map>

#include "sqdense/residue.hpp"

namespace sqd {

std::string to_string(CountMethod m) { return m == CountMethod::brute ? "brute" : "hensel"; }

Int LocalCount::norm() const {
  if (const auto* p = std::get_if<std::uint64_t>(&prime)) return Int(static_cast<unsigned long>(*p));
  return Int(static_cast<unsigned long>(std::get<PrimeA>(prime).norm()));
}

namespace {

// ---------------------------------------------------------------------------
// Univariate arithmetic over F_p, p < 2^31, coefficients low to high.

using PolyP = std::vector<std::uint64_t>;

void trim(PolyP& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) { return powmod_u64(a, p - 2, p); }

PolyP make_monic(PolyP a, std::uint64_t p) {
  trim(a);
  if (a.empty() || a.back() == 1) return a;
  const std::uint64_t inv = inv_mod(a.back(), p);
  for (auto& x : a) x = x * inv % p;
  return a;
}

// Remainder modulo a monic polynomial m.
PolyP rem_monic(PolyP a, const PolyP& m, std::uint64_t p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  while (a.size() > dm) {
    const std::uint64_t c = a.back();
    const std::size_t shift = a.size() - 1 - dm;
    if (c) {
      for (std::size_t i = 0; i < dm; ++i) a[shift + i] = (a[shift + i] + (p - c) * m[i]) % p;
    }
    a.pop_back();
    trim(a);
  }
  return a;
}

// Quotient of a by monic m (remainder discarded).
PolyP quot_monic(PolyP a, const PolyP& m, std::uint64_t p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  if (a.size() <= dm) return {};
  PolyP q(a.size() - dm, 0);
  while (a.size() > dm) {
    const std::uint64_t c = a.back();
    const std::size_t shift = a.size() - 1 - dm;
    q[shift] = c;
    if (c) {
      for (std::size_t i = 0; i < dm; ++i) a[shift + i] = (a[shift + i] + (p - c) * m[i]) % p;
    }
    a.pop_back();
  }
  trim(q);
  return q;
}

PolyP mul_mod(const PolyP& a, const PolyP& b, const PolyP& m, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  PolyP prod(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < b.size(); ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
  }
  return rem_monic(std::move(prod), m, p);
}

PolyP pow_mod(PolyP base, std::uint64_t e, const PolyP& m, std::uint64_t p) {
  PolyP result = rem_monic({1}, m, p);
  base = rem_monic(std::move(base), m, p);
  while (e) {
    if (e & 1) result = mul_mod(result, base, m, p);
    e >>= 1;
    if (e) base = mul_mod(base, base, m, p);
  }
  return result;
}

PolyP gcd_p(PolyP a, PolyP b, std::uint64_t p) {
  a = make_monic(std::move(a), p);
  b = make_monic(std::move(b), p);
  while (!b.empty()) {
    PolyP r = make_monic(rem_monic(a, b, p), p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

std::uint64_t horner_p(const PolyP& a, std::uint64_t x, std::uint64_t p) {
  std::uint64_t acc = 0;
  for (std::size_t i = a.size(); i-- > 0;) acc = (acc * x + a[i]) % p;
  return acc;
}

// Equal-degree splitting of a monic product of distinct linear factors (p odd).
void split_linear(const PolyP& g, std::uint64_t p, std::vector<std::uint64_t>& out) {
  if (g.size() <= 1) return;
  if (g.size() == 2) {
    out.push_back((p - g[0]) % p);
    return;
  }
  for (std::uint64_t a = 0; a < p; ++a) {
    PolyP h = pow_mod({a, 1}, (p - 1) / 2, g, p);
    if (h.empty()) h = {p - 1};
    else h[0] = (h[0] + p - 1) % p;
    trim(h);
    PolyP d = gcd_p(g, h, p);
    if (d.size() > 1 && d.size() < g.size()) {
      split_linear(d, p, out);
      split_linear(quot_monic(g, d, p), p, out);
      return;
    }
  }
  throw InternalError("root splitting did not terminate");
}

// ---------------------------------------------------------------------------

std::uint64_t checked_power(std::uint64_t base, std::uint64_t exp, std::uint64_t budget, const char* what) {
  std::uint64_t out = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (base != 0 && out > budget / base) {
      throw BudgetError(std::string(what) + ": enumeration of " + std::to_string(base) + "^" + std::to_string(exp) +
                        " points exceeds the budget of " + std::to_string(budget));
    }
    out *= base;
  }
  return out;
}

void check_counting_prime(std::uint64_t p) {
  if (p >= kMaxCountingPrime) throw DomainError("counting prime must be below 2^31");
  if (!is_prime_u64(p)) throw DomainError(std::to_string(p) + " is not prime");
}

// Odometer over all coordinates except `skip`, each in [0, n).
template <class Elem, class Fn>
void for_each_outer(std::size_t arity, std::size_t skip, std::uint64_t n, std::vector<Elem>& x, Fn&& fn) {
  x.assign(arity, 0);
  for (;;) {
    fn();
    std::size_t i = 0;
    for (; i < arity; ++i) {
      if (i == skip) continue;
      if (++x[i] < n) break;
      x[i] = 0;
    }
    if (i == arity) return;
  }
}

// Variable of least positive degree (root-finding coordinate), or 0.
template <class P>
std::size_t pick_root_variable(const P& f) {
  std::size_t best = 0;
  unsigned best_deg = 0;
  for (std::size_t i = 0; i < f.arity(); ++i) {
    const unsigned d = f.degree_in(i);
    if (d > 0 && (best_deg == 0 || d < best_deg)) {
      best = i;
      best_deg = d;
    }
  }
  return best;
}

LocalCount make_count(std::variant<std::uint64_t, PrimeA> prime, std::string label, unsigned power, std::size_t arity,
                      CountMethod method) {
  LocalCount out;
  out.prime = std::move(prime);
  out.label = std::move(label);
  out.power = power;
  out.arity = static_cast<unsigned>(arity);
  out.method = method;
  return out;
}

template <class P>
P merged(const P& f, const std::vector<std::string>& vars) {
  return f.variables() == vars ? f : f.with_variables(vars);
}

}  // namespace

std::vector<std::uint64_t> roots_mod_p(std::vector<std::uint64_t> coeffs, std::uint64_t p) {
  trim(coeffs);
  if (coeffs.empty()) throw DomainError("roots_mod_p: zero polynomial");
  std::vector<std::uint64_t> out;
  if (coeffs.size() == 1) return out;
  if (coeffs.size() == 2) {
    out.push_back((p - coeffs[0]) % p * inv_mod(coeffs[1], p) % p);
    return out;
  }
  if (p <= 4 * coeffs.size() + 64) {
    for (std::uint64_t x = 0; x < p; ++x) {
      if (horner_p(coeffs, x, p) == 0) out.push_back(x);
    }
    return out;
  }
  const PolyP f = make_monic(std::move(coeffs), p);
  PolyP xp = pow_mod({0, 1}, p, f, p);
  xp.resize(std::max<std::size_t>(xp.size(), 2), 0);
  xp[1] = (xp[1] + p - 1) % p;
  trim(xp);
  const PolyP g = gcd_p(f, xp, p);
  split_linear(g, p, out);
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Brute force.

LocalCount count_zeros_brute(const ZPoly& f, std::uint64_t p, unsigned power, std::uint64_t budget) {
  check_counting_prime(p);
  if (power != 1 && power != 2) throw DomainError("power must be 1 or 2");
  const std::uint64_t m = power == 1 ? p : p * p;
  const std::size_t n = f.arity();
  checked_power(m, n, budget, "count_zeros_brute");

  LocalCount out = make_count(p, std::to_string(p), power, n, CountMethod::brute);
  const ZmodRing R(m);
  if (n == 0) {
    out.count = R.from_int(f.coefficient({})) == 0 ? 1 : 0;
    return out;
  }
  const auto cf = compile(f, R);
  const std::size_t v = n - 1;
  const unsigned D = cf.degree_in(v);
  const bool table = (std::uint64_t{D} + 1) * m <= (std::uint64_t{1} << 22);
  std::vector<std::uint64_t> pw;
  if (table) {
    pw.resize((D + 1) * m);
    for (std::uint64_t x = 0; x < m; ++x) {
      std::uint64_t acc = 1 % m;
      for (unsigned k = 0; k <= D; ++k) {
        pw[k * m + x] = acc;
        acc = acc * x % m;
      }
    }
  }
  std::vector<std::uint64_t> x, u;
  std::uint64_t total = 0;
  for_each_outer(n, v, m, x, [&] {
    cf.coefficients_in(v, x.data(), u);
    std::vector<std::pair<const std::uint64_t*, std::uint64_t>> live;
    std::uint64_t u0 = u[0];
    for (unsigned k = 1; k <= D; ++k) {
      if (u[k]) live.emplace_back(table ? &pw[k * m] : nullptr, u[k]);
    }
    if (live.empty()) {
      total += u0 == 0 ? m : 0;
      return;
    }
    if (table) {
      // Each term is below m^2 and m^2 (D+1) < 2^64 here, so reduce once.
      for (std::uint64_t xv = 0; xv < m; ++xv) {
        std::uint64_t acc = u0;
        for (const auto& [row, c] : live) acc += c * row[xv];
        total += acc % m == 0;
      }
    } else {
      for (std::uint64_t xv = 0; xv < m; ++xv) {
        std::uint64_t acc = 0;
        for (unsigned k = D + 1; k-- > 0;) acc = (acc * xv + u[k]) % m;
        total += acc == 0;
      }
    }
  });
  out.count = Int(static_cast<unsigned long>(total));
  return out;
}

namespace {

// Counts zeros of f over a finite A-residue ring by enumerating every tuple,
// solving the last coordinate with Horner evaluation.
std::uint64_t count_ring_zeros(const CompiledPoly<AResidueRing>& cf, const AResidueRing& R) {
  const std::size_t n = cf.arity();
  const std::uint64_t N = R.size();
  const std::size_t v = n - 1;
  const unsigned D = cf.degree_in(v);
  std::vector<std::uint32_t> x, u;
  std::uint64_t total = 0;
  for_each_outer(n, v, N, x, [&] {
    cf.coefficients_in(v, x.data(), u);
    for (std::uint32_t xv = 0; xv < N; ++xv) {
      std::uint32_t acc = 0;
      for (unsigned k = D + 1; k-- > 0;) acc = R.add(R.mul(acc, xv), u[k]);
      total += acc == 0;
    }
  });
  return total;
}

}  // namespace

LocalCount count_zeros_brute(const APoly& f, const PrimeA& pi, unsigned power, std::uint64_t budget) {
  if (power != 1 && power != 2) throw DomainError("power must be 1 or 2");
  const std::size_t n = f.arity();
  const std::uint64_t N = checked_power(pi.norm(), power, budget, "count_zeros_brute");
  checked_power(N, n, budget, "count_zeros_brute");
  LocalCount out = make_count(pi, f.ring().render(pi.pi()), power, n, CountMethod::brute);
  const FqtRing& A = f.ring();
  const AResidueRing R(A, power == 1 ? pi.pi() : A.mul(pi.pi(), pi.pi()));
  if (n == 0) {
    out.count = R.from_poly(f.coefficient({})) == 0 ? 1 : 0;
    return out;
  }
  out.count = Int(static_cast<unsigned long>(count_ring_zeros(compile(f, R), R)));
  return out;
}

// ---------------------------------------------------------------------------
// Smooth/singular split.

LocalCount count_zeros_hensel(const ZPoly& f, std::uint64_t p, std::uint64_t budget) {
  check_counting_prime(p);
  const std::size_t n = f.arity();
  LocalCount out = make_count(p, std::to_string(p), 2, n, CountMethod::hensel);
  const ZmodRing R1(p);
  const Int P(static_cast<unsigned long>(p));
  const Int P2 = P * P;
  if (n == 0) {
    const bool zero = R1.from_int(f.coefficient({})) == 0;
    const bool lifts = mpz_divisible_p(f.coefficient({}).get_mpz_t(), P2.get_mpz_t()) != 0;
    out.singular_zeros = zero ? 1 : 0;
    out.singular_lifting = lifts ? 1 : 0;
    out.count = out.singular_lifting;
    return out;
  }
  const std::size_t v = pick_root_variable(f);
  checked_power(p, n - 1, budget, "count_zeros_hensel");

  const auto f1 = compile(f, R1);
  std::optional<ZmodRing> R2;
  std::optional<CompiledPoly<ZmodRing>> f2;
  if (p < (std::uint64_t{1} << 16)) {
    R2.emplace(p * p);
    f2.emplace(compile(f, *R2));
  }
  std::vector<CompiledPoly<ZmodRing>> grad;
  for (std::size_t i = 0; i < n; ++i) grad.push_back(compile(f.partial_derivative(i), R1));
  // Above 2^16, p^2 no longer fits the machine residue ring; singular zeros
  // are few, so they are evaluated exactly.
  std::vector<std::uint64_t> x, u;
  std::vector<Int> xi(n);
  auto lifts_mod_p2 = [&]() {
    if (f2) return f2->evaluate(x.data()) == 0;
    for (std::size_t i = 0; i < n; ++i) xi[i] = Int(static_cast<unsigned long>(x[i]));
    return mpz_divisible_p(f.evaluate(xi).get_mpz_t(), P2.get_mpz_t()) != 0;
  };

  std::uint64_t smooth = 0, singular = 0, lifting = 0;
  auto classify = [&](std::uint64_t r) {
    x[v] = r;
    for (const auto& g : grad) {
      if (g.evaluate(x.data()) != 0) {
        ++smooth;
        return;
      }
    }
    ++singular;
    lifting += lifts_mod_p2();
  };
  for_each_outer(n, v, p, x, [&] {
    f1.coefficients_in(v, x.data(), u);
    trim(u);
    if (u.empty()) {
      for (std::uint64_t r = 0; r < p; ++r) classify(r);
      return;
    }
    for (std::uint64_t r : roots_mod_p(u, p)) classify(r);
  });
  Int pn1, pn;
  mpz_pow_ui(pn1.get_mpz_t(), P.get_mpz_t(), n - 1);
  pn = pn1 * P;
  out.smooth_zeros = Int(static_cast<unsigned long>(smooth));
  out.singular_zeros = Int(static_cast<unsigned long>(singular));
  out.singular_lifting = Int(static_cast<unsigned long>(lifting));
  out.count = out.smooth_zeros * pn1 + out.singular_lifting * pn;
  return out;
}

LocalCount count_zeros_hensel(const APoly& f, const PrimeA& pi, std::uint64_t budget) {
  const std::size_t n = f.arity();
  const FqtRing& A = f.ring();
  const std::uint64_t N = pi.norm();
  LocalCount out = make_count(pi, A.render(pi.pi()), 2, n, CountMethod::hensel);

  const FqPoly pi2 = A.mul(pi.pi(), pi.pi());
  const std::uint64_t work = checked_power(N, n, budget, "count_zeros_hensel") * (f.total_degree() + 1);
  const AResidueRing R1(A, pi.pi(), work);
  // Only singular zeros are evaluated mod pi^2.
  const AResidueRing R2(A, pi2, 0);
  if (n == 0) {
    const FqPoly c = f.coefficient({});
    out.singular_zeros = A.rem(c, pi.pi()).is_zero() ? 1 : 0;
    out.singular_lifting = A.rem(c, pi2).is_zero() ? 1 : 0;
    out.count = out.singular_lifting;
    return out;
  }

  bool inseparable = true;
  std::vector<CompiledPoly<AResidueRing>> grad;
  for (std::size_t i = 0; i < n; ++i) {
    APoly d = f.partial_derivative(i);
    if (!d.is_zero()) inseparable = false;
    grad.push_back(compile(d, R1));
  }
  const auto f1 = compile(f, R1);
  const auto f2 = compile(f, R2);
  const auto ft = compile(t_partial_derivative(f), R1);

  std::uint64_t smooth = 0, singular = 0, lifting = 0;
  std::vector<std::uint32_t> x, u;
  const std::size_t v = n - 1;
  const unsigned D = f1.degree_in(v);
  for_each_outer(n, v, N, x, [&] {
    f1.coefficients_in(v, x.data(), u);
    for (std::uint32_t xv = 0; xv < N; ++xv) {
      std::uint32_t acc = 0;
      for (unsigned k = D + 1; k-- > 0;) acc = R1.add(R1.mul(acc, xv), u[k]);
      if (acc != 0) continue;
      x[v] = xv;
      bool is_smooth = false;
      for (const auto& g : grad) {
        if (g.evaluate(x.data()) != 0) {
          is_smooth = true;
          break;
        }
      }
      if (is_smooth) {
        ++smooth;
        continue;
      }
      ++singular;
      // The canonical lift of a residue mod pi has the same index mod pi^2.
      if (inseparable) {
        lifting += ft.evaluate(x.data()) == 0;
      } else {
        lifting += f2.evaluate(x.data()) == 0;
      }
    }
  });
  Int Nn1, Nn;
  mpz_ui_pow_ui(Nn1.get_mpz_t(), N, n - 1);
  Nn = Nn1 * static_cast<unsigned long>(N);
  out.smooth_zeros = Int(static_cast<unsigned long>(smooth));
  out.singular_zeros = Int(static_cast<unsigned long>(singular));
  out.singular_lifting = Int(static_cast<unsigned long>(lifting));
  out.count = out.smooth_zeros * Nn1 + out.singular_lifting * Nn;
  return out;
}

// ---------------------------------------------------------------------------
// Common zeros mod a prime.

LocalCount count_common_zeros(const ZPoly& f_in, const ZPoly& g_in, std::uint64_t p, std::uint64_t budget) {
  check_counting_prime(p);
  if (f_in.arity() != g_in.arity()) throw DomainError("count_common_zeros: arity mismatch");
  const auto vars = merge_variables(f_in.variables(), g_in.variables());
  if (vars.size() != f_in.arity()) throw DomainError("count_common_zeros: polynomials use different variables");
  const ZPoly f = merged(f_in, vars), g = merged(g_in, vars);
  const std::size_t n = vars.size();
  LocalCount out = make_count(p, std::to_string(p), 1, n, CountMethod::brute);
  const ZmodRing R(p);
  if (n == 0) {
    out.count = R.from_int(f.coefficient({})) == 0 && R.from_int(g.coefficient({})) == 0 ? 1 : 0;
    return out;
  }
  const std::size_t v = f.degree_in(pick_root_variable(f)) > 0 ? pick_root_variable(f) : pick_root_variable(g);
  checked_power(p, n - 1, budget, "count_common_zeros");
  const auto cf = compile(f, R), cg = compile(g, R);
  std::vector<std::uint64_t> x, uf, ug;
  std::uint64_t total = 0;
  for_each_outer(n, v, p, x, [&] {
    cf.coefficients_in(v, x.data(), uf);
    trim(uf);
    if (uf.size() == 1) return;
    cg.coefficients_in(v, x.data(), ug);
    trim(ug);
    if (ug.size() == 1) return;
    if (uf.empty() && ug.empty()) {
      total += p;
    } else if (uf.empty()) {
      total += roots_mod_p(ug, p).size();
    } else if (ug.empty()) {
      total += roots_mod_p(uf, p).size();
    } else {
      const PolyP d = gcd_p(uf, ug, p);
      if (d.size() > 1) total += roots_mod_p(d, p).size();
    }
  });
  out.count = Int(static_cast<unsigned long>(total));
  return out;
}

LocalCount count_common_zeros(const APoly& f_in, const APoly& g_in, const PrimeA& pi, std::uint64_t budget) {
  if (f_in.arity() != g_in.arity()) throw DomainError("count_common_zeros: arity mismatch");
  const auto vars = merge_variables(f_in.variables(), g_in.variables());
  if (vars.size() != f_in.arity()) throw DomainError("count_common_zeros: polynomials use different variables");
  const APoly f = merged(f_in, vars), g = merged(g_in, vars);
  const std::size_t n = vars.size();
  const std::uint64_t N = pi.norm();
  const std::uint64_t work = checked_power(N, n, budget, "count_common_zeros") * (f.total_degree() + g.total_degree() + 2);
  LocalCount out = make_count(pi, f.ring().render(pi.pi()), 1, n, CountMethod::brute);
  const AResidueRing R(f.ring(), pi.pi(), work);
  const auto cf = compile(f, R), cg = compile(g, R);
  std::vector<std::uint32_t> x;
  std::uint64_t total = 0;
  if (n == 0) {
    out.count = cf.evaluate(x.data()) == 0 && cg.evaluate(x.data()) == 0 ? 1 : 0;
    return out;
  }
  for_each_outer(n, n, N, x, [&] { total += cf.evaluate(x.data()) == 0 && cg.evaluate(x.data()) == 0; });
  out.count = Int(static_cast<unsigned long>(total));
  return out;
}

// ---------------------------------------------------------------------------
// Restriction of scalars and the t-derivative criterion.

APoly restrict_scalars(const APoly& f, const std::vector<std::string>& selected) {
  const FqtRing& A = f.ring();
  const std::uint32_t p = A.characteristic();
  for (const auto& s : selected) {
    if (!f.index_of(s)) throw DomainError("restrict_scalars: unknown variable '" + s + "'");
  }
  auto is_selected = [&](const std::string& v) {
    return std::find(selected.begin(), selected.end(), v) != selected.end();
  };
  std::vector<std::string> vars;
  for (const auto& v : f.variables()) {
    if (!is_selected(v)) {
      vars.push_back(v);
      continue;
    }
    for (std::uint32_t j = 0; j < p; ++j) {
      std::string name = v + "_" + std::to_string(j);
      if (f.index_of(name)) throw DomainError("restrict_scalars: variable name '" + name + "' already in use");
      vars.push_back(std::move(name));
    }
  }
  // Image of each old variable in the new ring.
  std::vector<APoly> image;
  for (const auto& v : f.variables()) {
    if (!is_selected(v)) {
      image.push_back(APoly::variable(A, vars, static_cast<std::size_t>(std::find(vars.begin(), vars.end(), v) -
                                                                         vars.begin())));
      continue;
    }
    APoly sum(A, vars);
    for (std::uint32_t j = 0; j < p; ++j) {
      const std::string name = v + "_" + std::to_string(j);
      const auto idx = static_cast<std::size_t>(std::find(vars.begin(), vars.end(), name) - vars.begin());
      Exponents e(vars.size(), 0);
      e[idx] = p;
      sum.add_term(std::move(e), FqPoly::monomial(1, j));
    }
    image.push_back(std::move(sum));
  }
  std::vector<std::map<std::uint32_t, APoly>> powers(f.arity());
  auto power_of = [&](std::size_t i, std::uint32_t k) -> const APoly& {
    auto it = powers[i].find(k);
    if (it == powers[i].end()) it = powers[i].emplace(k, image[i].pow(k)).first;
    return it->second;
  };
  APoly out(A, vars);
  for (const auto& [e, c] : f.terms()) {
    APoly term = APoly::constant(A, vars, c);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i]) term = term * power_of(i, e[i]);
    }
    out = out + term;
  }
  return out;
}

namespace {

void check_inseparable(const APoly& F) {
  const std::uint32_t p = F.ring().characteristic();
  for (const auto& [e, c] : F.terms()) {
    for (auto x : e) {
      if (x % p != 0) {
        throw PreconditionError("derivative criterion needs every exponent divisible by the characteristic " +
                                std::to_string(p));
      }
    }
  }
}

}  // namespace

CriterionResult derivative_criterion(const APoly& F, const PrimeA& pi, std::span<const FqPoly> point) {
  check_inseparable(F);
  const FqtRing& A = F.ring();
  const FqPoly value = F.evaluate(point);
  const FqPoly dt = t_partial_derivative(F).evaluate(point);
  CriterionResult out;
  out.via_square = A.rem(value, A.mul(pi.pi(), pi.pi())).is_zero();
  out.via_pair = A.rem(value, pi.pi()).is_zero() && A.rem(dt, pi.pi()).is_zero();
  return out;
}

CriterionBoxReport derivative_criterion_box(const APoly& F, const PrimeA& pi, unsigned lift, std::uint64_t budget) {
  check_inseparable(F);
  if (lift < 2) throw DomainError("derivative_criterion_box: lift must be at least 2");
  const FqtRing& A = F.ring();
  const std::size_t n = F.arity();
  const std::uint64_t L = checked_power(A.q(), std::uint64_t{lift} * pi.degree(), budget, "derivative_criterion_box");
  const std::uint64_t total = checked_power(L, n, budget, "derivative_criterion_box");

  const AResidueRing R2(A, A.mul(pi.pi(), pi.pi()));
  const AResidueRing R1(A, pi.pi());
  std::vector<std::uint32_t> red2(L), red21(R2.size());
  for (std::uint64_t a = 0; a < L; ++a) red2[a] = R2.reduce_index(a);
  for (std::uint32_t a = 0; a < R2.size(); ++a) red21[a] = R1.reduce_index(a);

  const auto f2 = compile(F, R2);
  const auto d1 = compile(t_partial_derivative(F), R1);
  CriterionBoxReport report;
  report.points = total;

  auto record = [&](bool sq, bool pair, const std::vector<std::uint64_t>& point) {
    report.square_divisible += sq;
    if (sq == pair) {
      ++report.agreements;
    } else if (!report.first_mismatch) {
      std::vector<FqPoly> pt;
      for (auto idx : point) pt.push_back(A.from_index(idx));
      report.first_mismatch = std::move(pt);
    }
  };

  if (n == 0) {
    const bool sq = f2.evaluate(nullptr) == 0;
    const bool pair = red21[f2.evaluate(nullptr)] == 0 && d1.evaluate(nullptr) == 0;
    record(sq, pair, {});
    return report;
  }

  // Outer coordinates are reduced into both rings; the last coordinate runs
  // over the whole lift range against per-exponent power tables.
  const std::size_t v = n - 1;
  const unsigned D2 = f2.degree_in(v), D1 = d1.degree_in(v);
  std::vector<std::uint32_t> pw2((D2 + 1) * L), pw1((D1 + 1) * L);
  for (std::uint64_t a = 0; a < L; ++a) {
    std::uint32_t acc = R2.one();
    for (unsigned k = 0; k <= D2; ++k) {
      pw2[k * L + a] = acc;
      acc = R2.mul(acc, red2[a]);
    }
    const std::uint32_t r1 = red21[red2[a]];
    acc = R1.one();
    for (unsigned k = 0; k <= D1; ++k) {
      pw1[k * L + a] = acc;
      acc = R1.mul(acc, r1);
    }
  }

  std::vector<std::uint64_t> raw;
  std::vector<std::uint32_t> x2(n), x1(n), u2, u1;
  for_each_outer(n, v, L, raw, [&] {
    for (std::size_t i = 0; i < n; ++i) {
      if (i == v) continue;
      x2[i] = red2[raw[i]];
      x1[i] = red21[x2[i]];
    }
    f2.coefficients_in(v, x2.data(), u2);
    d1.coefficients_in(v, x1.data(), u1);
    std::vector<std::pair<const std::uint32_t*, std::uint32_t>> live2, live1;
    for (unsigned k = 1; k <= D2; ++k) {
      if (u2[k]) live2.emplace_back(&pw2[k * L], u2[k]);
    }
    for (unsigned k = 1; k <= D1; ++k) {
      if (u1[k]) live1.emplace_back(&pw1[k * L], u1[k]);
    }
    for (std::uint64_t a = 0; a < L; ++a) {
      std::uint32_t val = u2[0];
      for (const auto& [row, c] : live2) val = R2.add(val, R2.mul(c, row[a]));
      const bool sq = val == 0;
      bool pair = false;
      if (red21[val] == 0) {
        std::uint32_t dv = u1[0];
        for (const auto& [row, c] : live1) dv = R1.add(dv, R1.mul(c, row[a]));
        pair = dv == 0;
      }
      if (sq == pair) {
        report.square_divisible += sq;
        ++report.agreements;
      } else {
        raw[v] = a;
        record(sq, pair, raw);
      }
    }
  });
  return report;
}

}  // namespace sqd
