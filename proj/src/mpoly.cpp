#include "sqdense/mpoly.hpp"

#include <cctype>
#include <set>

#include "expr_parse.hpp"
#include "sqdense/rng.hpp"
#include "sqdense/upoly.hpp"

namespace sqd {

bool natural_less(std::string_view a, std::string_view b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const bool da = std::isdigit(static_cast<unsigned char>(a[i]));
    const bool db = std::isdigit(static_cast<unsigned char>(b[j]));
    if (da && db) {
      std::size_t ei = i, ej = j;
      while (ei < a.size() && std::isdigit(static_cast<unsigned char>(a[ei]))) ++ei;
      while (ej < b.size() && std::isdigit(static_cast<unsigned char>(b[ej]))) ++ej;
      const Int na(std::string(a.substr(i, ei - i))), nb(std::string(b.substr(j, ej - j)));
      if (na != nb) return na < nb;
      if (ei - i != ej - j) return ei - i < ej - j;
      i = ei;
      j = ej;
      continue;
    }
    if (a[i] != b[j]) return a[i] < b[j];
    ++i;
    ++j;
  }
  return a.size() - i < b.size() - j;
}

std::vector<std::string> merge_variables(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::string> out = a;
  for (const auto& v : b) {
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  std::sort(out.begin(), out.end(), [](const std::string& x, const std::string& y) { return natural_less(x, y); });
  return out;
}

namespace {

// First pass: validates syntax and collects identifiers.
struct IdentifierCollector {
  struct Value {};
  bool t_is_coefficient;
  std::set<std::string> names;

  Value from_int(const Int&, detail::SourcePos) { return {}; }
  Value from_tuple(const std::vector<std::uint32_t>&, detail::SourcePos) { return {}; }
  Value from_identifier(std::string_view name, detail::SourcePos) {
    if (!(t_is_coefficient && name == "t")) names.emplace(name);
    return {};
  }
  Value add(Value, Value) { return {}; }
  Value sub(Value, Value) { return {}; }
  Value neg(Value) { return {}; }
  Value mul(Value, Value) { return {}; }
  Value pow(Value, unsigned) { return {}; }
};

template <class R>
struct PolyBuilder {
  using Value = MPoly<R>;
  const R& ring;
  const std::vector<std::string>& vars;

  Value constant(typename R::Elem c) const { return Value::constant(ring, vars, std::move(c)); }

  Value from_int(const Int& n, detail::SourcePos) const { return constant(ring.from_int(n)); }
  Value from_tuple(const std::vector<std::uint32_t>& digits, detail::SourcePos pos) const {
    if constexpr (std::is_same_v<R, FqtRing>) {
      try {
        return constant(FqPoly::constant(ring.field().from_digits(digits)));
      } catch (const DomainError& e) {
        throw ParseError(std::string("coefficient not in ring: ") + e.what(), pos.line, pos.column);
      }
    } else {
      throw ParseError("coefficient not in ring: tuple coefficients need an F_q[t] ring", pos.line, pos.column);
    }
  }
  Value from_identifier(std::string_view name, detail::SourcePos pos) const {
    if constexpr (std::is_same_v<R, FqtRing>) {
      if (name == "t") return constant(ring.t());
    }
    auto it = std::find(vars.begin(), vars.end(), name);
    if (it == vars.end()) throw ParseError("unknown variable '" + std::string(name) + "'", pos.line, pos.column);
    return Value::variable(ring, vars, static_cast<std::size_t>(it - vars.begin()));
  }
  Value add(const Value& a, const Value& b) const { return a + b; }
  Value sub(const Value& a, const Value& b) const { return a - b; }
  Value neg(const Value& a) const { return -a; }
  Value mul(const Value& a, const Value& b) const { return a * b; }
  Value pow(const Value& a, unsigned e) const { return a.pow(e); }
};

template <class R>
MPoly<R> parse_generic(std::string_view text, const R& ring, const std::vector<std::string>& vars_in) {
  IdentifierCollector collector{std::is_same_v<R, FqtRing>, {}};
  detail::parse_expression(text, collector);
  std::vector<std::string> vars = vars_in;
  if (vars.empty()) {
    vars.assign(collector.names.begin(), collector.names.end());
    std::sort(vars.begin(), vars.end(), [](const std::string& x, const std::string& y) { return natural_less(x, y); });
  }
  PolyBuilder<R> builder{ring, vars};
  return detail::parse_expression(text, builder);
}

std::string render_monomial(const std::vector<std::string>& vars, const Exponents& e) {
  std::string out;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (!out.empty()) out += "*";
    out += vars[i];
    if (e[i] > 1) out += "^" + std::to_string(e[i]);
  }
  return out;
}

}  // namespace

ZPoly parse_zpoly(std::string_view text, const std::vector<std::string>& vars) {
  return parse_generic(text, IntegerRing{}, vars);
}

APoly parse_apoly(std::string_view text, const FqtRing& ring, const std::vector<std::string>& vars) {
  if (std::find(vars.begin(), vars.end(), "t") != vars.end()) {
    throw DomainError("'t' is reserved for the generator of F_q[t]");
  }
  return parse_generic(text, ring, vars);
}

AnyPoly parse_poly(std::string_view text, RingTag ring, const std::vector<std::string>& vars) {
  if (ring.is_integers()) return parse_zpoly(text, vars);
  return parse_apoly(text, FqtRing(ring.q), vars);
}

std::string render(const ZPoly& f) {
  if (f.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : f.terms()) {
    const bool negative = sgn(c) < 0;
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    const Int mag = abs(c);
    const std::string mono = render_monomial(f.variables(), e);
    if (mono.empty()) {
      out += mag.get_str();
    } else if (mag == 1) {
      out += mono;
    } else {
      out += mag.get_str() + "*" + mono;
    }
  }
  return out;
}

std::string render(const APoly& f) {
  if (f.is_zero()) return "0";
  const FqtRing& ring = f.ring();
  std::string out;
  for (const auto& [e, c] : f.terms()) {
    if (!out.empty()) out += " + ";
    const std::string mono = render_monomial(f.variables(), e);
    std::size_t nonzero = 0;
    for (auto x : c.c) nonzero += x != 0;
    std::string coef = ring.render(c);
    if (nonzero > 1 && (!mono.empty() || f.num_terms() > 1)) coef = "(" + coef + ")";
    if (mono.empty()) {
      out += coef;
    } else if (ring.is_one(c)) {
      out += mono;
    } else {
      out += coef + "*" + mono;
    }
  }
  return out;
}

APoly t_partial_derivative(const APoly& f) {
  const FqtRing& ring = f.ring();
  return f.map_coefficients([&](const FqPoly& c) { return ring.derivative(c); });
}

ZPoly partial_derivative(const ZPoly& f, std::string_view var) {
  auto idx = f.index_of(var);
  if (!idx) throw DomainError("unknown variable '" + std::string(var) + "'");
  return f.partial_derivative(*idx);
}

APoly partial_derivative(const APoly& f, std::string_view var) {
  if (var == "t") return t_partial_derivative(f);
  auto idx = f.index_of(var);
  if (!idx) throw DomainError("unknown variable '" + std::string(var) + "'");
  return f.partial_derivative(*idx);
}

ZPoly reduce_mod(const ZPoly& f, const Int& modulus) {
  const Int m = abs(modulus);
  if (m <= 1) throw DomainError("reduce_mod: modulus must be a nonzero non-unit");
  return f.map_coefficients([&](const Int& c) {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
    return r;
  });
}

APoly reduce_mod(const APoly& f, const FqPoly& modulus) {
  if (modulus.degree() < 1) throw DomainError("reduce_mod: modulus must be a nonzero non-unit");
  const FqtRing& ring = f.ring();
  return f.map_coefficients([&](const FqPoly& c) { return ring.rem(c, modulus); });
}

namespace {

template <class R>
UPoly<R> specialize(const MPoly<R>& f, std::size_t free_var, const std::vector<typename R::Elem>& values) {
  const R& ring = f.ring();
  UPolyOps<R> ops(ring);
  std::vector<typename R::Elem> coeffs(f.degree_in(free_var) + 1, ring.zero());
  for (const auto& [e, c] : f.terms()) {
    typename R::Elem term = c;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (i == free_var || e[i] == 0) continue;
      typename R::Elem pw = ring.one();
      for (unsigned k = 0; k < e[i]; ++k) pw = ring.mul(pw, values[i]);
      term = ring.mul(term, pw);
    }
    coeffs[e[free_var]] = ring.add(coeffs[e[free_var]], term);
  }
  return ops.make(std::move(coeffs));
}

// Squarefree over the fraction field: characteristic 0.
bool univariate_squarefree(const UPolyOps<IntegerRing>& ops, const UPoly<IntegerRing>& u) {
  if (u.degree() <= 0) return true;
  return ops.gcd(u, ops.derivative(u)).degree() == 0;
}

// Squarefree over K = F_q(t), which is imperfect: with d = gcd(u, u'), u is
// squarefree iff d is coprime to u/d and d is coprime to its t-derivative.
bool univariate_squarefree(const UPolyOps<FqtRing>& ops, const UPoly<FqtRing>& u) {
  if (u.degree() <= 0) return true;
  const UPoly<FqtRing> d = ops.gcd(u, ops.derivative(u));
  if (d.degree() == 0) return true;
  const UPoly<FqtRing> w = ops.divexact(ops.primitive(u), d);
  if (ops.gcd(d, w).degree() != 0) return false;
  UPoly<FqtRing> dt;
  for (const auto& c : d.c) dt.c.push_back(ops.domain().derivative(c));
  ops.trim(dt);
  return ops.gcd(d, dt).degree() == 0;
}

template <class R, class Draw, class Show>
SquarefreeCheck squarefree_check_impl(const MPoly<R>& f, unsigned trials, std::uint64_t seed, Draw draw,
                                      Show show) {
  if (f.is_zero()) throw DomainError("heuristic_squarefree_check: zero polynomial");
  SquarefreeCheck out;
  if (f.is_constant()) {
    out.outcome = SquarefreeCheck::Outcome::vacuous_pass;
    out.detail = "constant";
    return out;
  }
  std::vector<std::size_t> occurring;
  for (std::size_t i = 0; i < f.arity(); ++i) {
    if (f.degree_in(i) > 0) occurring.push_back(i);
  }
  UPolyOps<R> ops(f.ring());
  Xoshiro256 rng(seed);
  constexpr unsigned kConfirmations = 3;
  constexpr unsigned kMaxRedraws = 64;

  // A non-degenerate specialization keeps the free variable's degree.
  auto specialization = [&](std::size_t var, std::vector<typename R::Elem>& values) -> bool {
    for (unsigned attempt = 0; attempt < kMaxRedraws; ++attempt) {
      values.assign(f.arity(), f.ring().zero());
      for (std::size_t i = 0; i < f.arity(); ++i) {
        if (i != var) values[i] = draw(rng);
      }
      if (specialize(f, var, values).degree() == static_cast<int>(f.degree_in(var))) return true;
    }
    return false;
  };

  for (unsigned trial = 0; trial < trials; ++trial) {
    const std::size_t var = occurring[trial % occurring.size()];
    std::vector<typename R::Elem> values;
    if (!specialization(var, values)) continue;
    if (univariate_squarefree(ops, specialize(f, var, values))) continue;
    // Confirm with fresh specializations so that a single unlucky draw of a
    // squarefree f is not reported as a failure.
    bool confirmed = true;
    for (unsigned k = 0; k < kConfirmations && confirmed; ++k) {
      std::vector<typename R::Elem> again;
      if (!specialization(var, again)) break;
      confirmed = !univariate_squarefree(ops, specialize(f, var, again));
    }
    if (!confirmed) continue;
    out.outcome = SquarefreeCheck::Outcome::fail;
    out.free_variable = f.variables()[var];
    for (std::size_t i = 0; i < f.arity(); ++i) {
      if (i == var) continue;
      out.specialization.push_back(show(values[i]));
    }
    out.detail = "repeated factor in " + out.free_variable;
    return out;
  }
  return out;
}

template <class R, class Draw, class Show>
CommonFactorCheck common_factor_impl(const MPoly<R>& f, const MPoly<R>& g, unsigned trials, std::uint64_t seed,
                                     Draw draw, Show show) {
  if (f.is_zero() || g.is_zero()) throw DomainError("heuristic_common_factor_check: zero polynomial");
  if (f.variables() != g.variables()) throw DomainError("heuristic_common_factor_check: variable lists differ");
  CommonFactorCheck out;
  // A shared nonconstant factor involves a variable occurring in both.
  std::vector<std::size_t> shared;
  for (std::size_t i = 0; i < f.arity(); ++i) {
    if (f.degree_in(i) > 0 && g.degree_in(i) > 0) shared.push_back(i);
  }
  if (shared.empty()) return out;
  UPolyOps<R> ops(f.ring());
  Xoshiro256 rng(seed);
  constexpr unsigned kConfirmations = 3;
  constexpr unsigned kMaxRedraws = 64;

  auto specialization = [&](std::size_t var, std::vector<typename R::Elem>& values) -> bool {
    for (unsigned attempt = 0; attempt < kMaxRedraws; ++attempt) {
      values.assign(f.arity(), f.ring().zero());
      for (std::size_t i = 0; i < f.arity(); ++i) {
        if (i != var) values[i] = draw(rng);
      }
      if (specialize(f, var, values).degree() == static_cast<int>(f.degree_in(var)) &&
          specialize(g, var, values).degree() == static_cast<int>(g.degree_in(var))) {
        return true;
      }
    }
    return false;
  };
  auto shares = [&](std::size_t var, const std::vector<typename R::Elem>& values) {
    return ops.gcd(specialize(f, var, values), specialize(g, var, values)).degree() > 0;
  };

  for (unsigned trial = 0; trial < trials; ++trial) {
    const std::size_t var = shared[trial % shared.size()];
    std::vector<typename R::Elem> values;
    if (!specialization(var, values) || !shares(var, values)) continue;
    bool confirmed = true;
    for (unsigned k = 0; k < kConfirmations && confirmed; ++k) {
      std::vector<typename R::Elem> again;
      if (!specialization(var, again)) break;
      confirmed = shares(var, again);
    }
    if (!confirmed) continue;
    out.common = true;
    out.free_variable = f.variables()[var];
    for (std::size_t i = 0; i < f.arity(); ++i) {
      if (i != var) out.specialization.push_back(show(values[i]));
    }
    out.detail = "common factor in " + out.free_variable;
    return out;
  }
  return out;
}

}  // namespace

SquarefreeCheck heuristic_squarefree_check(const ZPoly& f, unsigned trials, std::uint64_t seed, unsigned range) {
  auto draw = [range](Xoshiro256& rng) { return Int(static_cast<long>(rng.below(2 * range + 1)) - static_cast<long>(range)); };
  auto show = [](const Int& v) { return v.get_str(); };
  return squarefree_check_impl(f, trials, seed, draw, show);
}

SquarefreeCheck heuristic_squarefree_check(const APoly& f, unsigned trials, std::uint64_t seed, unsigned max_degree) {
  const FqtRing& ring = f.ring();
  std::uint64_t count = 1;
  for (unsigned i = 0; i <= max_degree; ++i) count *= ring.q();
  auto draw = [&ring, count](Xoshiro256& rng) { return ring.from_index(rng.below(count)); };
  auto show = [&ring](const FqPoly& v) { return ring.render(v); };
  return squarefree_check_impl(f, trials, seed, draw, show);
}

CommonFactorCheck heuristic_common_factor_check(const ZPoly& f, const ZPoly& g, unsigned trials, std::uint64_t seed,
                                               unsigned range) {
  auto draw = [range](Xoshiro256& rng) { return Int(static_cast<long>(rng.below(2 * range + 1)) - static_cast<long>(range)); };
  auto show = [](const Int& v) { return v.get_str(); };
  return common_factor_impl(f, g, trials, seed, draw, show);
}

CommonFactorCheck heuristic_common_factor_check(const APoly& f, const APoly& g, unsigned trials, std::uint64_t seed,
                                               unsigned max_degree) {
  const FqtRing& ring = f.ring();
  std::uint64_t count = 1;
  for (unsigned i = 0; i <= max_degree; ++i) count *= ring.q();
  auto draw = [&ring, count](Xoshiro256& rng) { return ring.from_index(rng.below(count)); };
  auto show = [&ring](const FqPoly& v) { return ring.render(v); };
  return common_factor_impl(f, g, trials, seed, draw, show);
}

}  // namespace sqd
