#include "sqdense/density.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <thread>

#include "sqdense/rng.hpp"

namespace sqd {

namespace {

Real to_real(const Int& n) {
  if (n.fits_ulong_p()) return Real(n.get_ui());
  return Real(n.get_str());
}

Int int_pow(const Int& base, unsigned e) {
  Int out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
  return out;
}

// q with q^d = norm.
std::uint64_t field_order(std::uint64_t norm, int degree) {
  auto q = static_cast<std::uint64_t>(std::llround(std::pow(static_cast<double>(norm), 1.0 / degree)));
  for (std::uint64_t c = q > 1 ? q - 1 : 1; c <= q + 1; ++c) {
    std::uint64_t v = 1;
    for (int i = 0; i < degree; ++i) v *= c;
    if (v == norm) return c;
  }
  throw InternalError("norm " + std::to_string(norm) + " is not a prime power of degree " + std::to_string(degree));
}

void validate_integer_primes(const std::vector<LocalCount>& counts, std::uint64_t cutoff) {
  std::set<std::uint64_t> seen;
  for (const auto& c : counts) {
    const auto* p = std::get_if<std::uint64_t>(&c.prime);
    if (!p) throw DomainError("euler_product: counts mix Z and F_q[t] primes");
    if (*p > cutoff) throw DomainError("euler_product: prime " + std::to_string(*p) + " exceeds the cutoff");
    if (!is_prime_u64(*p)) throw DomainError("euler_product: " + std::to_string(*p) + " is not prime");
    if (!seen.insert(*p).second) throw DomainError("euler_product: duplicate prime " + std::to_string(*p));
  }
  const auto primes = primes_up_to(cutoff);
  if (seen.size() != primes.size()) {
    for (auto p : primes) {
      if (!seen.count(p)) throw DomainError("euler_product: missing prime " + std::to_string(p));
    }
  }
}

std::uint64_t validate_a_primes(const std::vector<LocalCount>& counts, std::uint64_t cutoff) {
  std::set<std::vector<Fq::Elem>> seen;
  std::map<unsigned, Int> per_degree;
  std::uint64_t q = 0;
  for (const auto& c : counts) {
    const auto* pi = std::get_if<PrimeA>(&c.prime);
    if (!pi) throw DomainError("euler_product: counts mix Z and F_q[t] primes");
    const auto d = static_cast<unsigned>(pi->degree());
    if (d > cutoff) throw DomainError("euler_product: prime " + c.label + " exceeds the degree cutoff");
    const std::uint64_t qc = field_order(pi->norm(), pi->degree());
    if (q == 0) q = qc;
    if (qc != q) throw DomainError("euler_product: counts over different fields");
    if (!seen.insert(pi->pi().c).second) throw DomainError("euler_product: duplicate prime " + c.label);
    per_degree[d] += 1;
  }
  if (q == 0) {
    if (cutoff > 0) throw DomainError("euler_product: no primes given for a positive degree cutoff");
    return 0;
  }
  for (unsigned d = 1; d <= cutoff; ++d) {
    if (per_degree[d] != necklace_count(q, d)) {
      throw DomainError("euler_product: missing primes of degree " + std::to_string(d));
    }
  }
  return q;
}

}  // namespace

EulerProduct euler_product(const std::vector<LocalCount>& counts, unsigned norm_exponent, std::uint64_t cutoff) {
  if (norm_exponent == 0) throw DomainError("euler_product: norm exponent must be positive");
  EulerProduct out;
  out.cutoff = cutoff;
  out.norm_exponent = norm_exponent;
  out.rigorous = false;
  out.degree_cutoff = !counts.empty() && std::holds_alternative<PrimeA>(counts.front().prime);

  std::uint64_t q = 0;
  if (out.degree_cutoff) {
    q = validate_a_primes(counts, cutoff);
  } else {
    validate_integer_primes(counts, cutoff);
  }

  out.value = 1;
  out.factors.reserve(counts.size());
  for (const auto& lc : counts) {
    const Int norm = lc.norm();
    const Int full = int_pow(norm, norm_exponent);
    if (lc.count < 0 || lc.count > full) {
      throw DomainError("euler_product: count at " + lc.label + " is outside [0, |p|^k]");
    }
    EulerFactor f{lc.label, norm, lc.count, Real(1)};
    if (lc.count == full) {
      f.factor = 0;
      if (!out.zero_at) out.zero_at = lc.label;
    } else if (lc.count != 0) {
      f.factor = 1 - to_real(lc.count) / pow(to_real(norm), static_cast<int>(norm_exponent));
    }
    out.value *= f.factor;
    out.factors.push_back(std::move(f));
  }
  if (out.zero_at) out.value = 0;
  apply_tail_bracket(out, q);
  return out;
}

void apply_tail_bracket(EulerProduct& e, std::uint64_t field_order) {
  // c <= kappa |p|^(k-2) over the observed primes.
  double kappa = 0;
  for (const auto& f : e.factors) {
    if (f.c == 0) continue;
    kappa = std::max(kappa, f.c.get_d() * std::pow(f.norm.get_d(), 2.0 - static_cast<double>(e.norm_exponent)));
  }
  e.kappa = kappa;
  // Omitted primes contribute sum log(1 - x_p) with x_p <= kappa / |p|^2, and
  // log(1 - x) >= -x / (1 - x).
  double tail_sum = 0, smallest_norm = 0;
  if (field_order) {
    const double qd = static_cast<double>(field_order);
    tail_sum = std::pow(qd, -static_cast<double>(e.cutoff)) / (qd - 1);
    smallest_norm = std::pow(qd, static_cast<double>(e.cutoff + 1));
  } else {
    tail_sum = 1.0 / static_cast<double>(std::max<std::uint64_t>(e.cutoff, 1));
    smallest_norm = static_cast<double>(e.cutoff + 1);
  }
  e.tail_high = 0;
  if (e.zero_at || kappa == 0) {
    e.tail_low = 0;
  } else {
    const double x_max = kappa / (smallest_norm * smallest_norm);
    e.tail_low = x_max >= 1 ? -std::numeric_limits<double>::infinity() : -kappa * tail_sum / (1 - x_max);
  }
}

EulerProduct squarefree_density_Z(const ZPoly& f, std::uint64_t cutoff, const ProductOptions& opt) {
  if (f.is_zero()) throw DomainError("squarefree_density: zero polynomial");
  if (cutoff >= kMaxCountingPrime) throw DomainError("squarefree_density: cutoff must be below 2^31");
  if (!opt.override_check) {
    const auto check = heuristic_squarefree_check(f, opt.trials, opt.seed);
    if (check.outcome == SquarefreeCheck::Outcome::fail) {
      std::string witness;
      for (const auto& v : check.specialization) witness += (witness.empty() ? "" : ", ") + v;
      throw PreconditionError("polynomial is not squarefree: " + check.detail +
                              (witness.empty() ? "" : " (other variables = " + witness + ")"));
    }
  }
  std::vector<LocalCount> counts;
  for (auto p : primes_up_to(cutoff)) counts.push_back(count_zeros_hensel(f, p, opt.budget));
  return euler_product(counts, static_cast<unsigned>(2 * f.arity()), cutoff);
}

EulerProduct coprime_density(const ZPoly& f, const ZPoly& g, std::uint64_t cutoff, const ProductOptions& opt) {
  if (f.is_zero() || g.is_zero()) throw DomainError("coprime_density: zero polynomial");
  if (cutoff >= kMaxCountingPrime) throw DomainError("coprime_density: cutoff must be below 2^31");
  const auto vars = merge_variables(f.variables(), g.variables());
  const ZPoly F = f.with_variables(vars), G = g.with_variables(vars);
  if (!opt.override_check) {
    const auto check = heuristic_common_factor_check(F, G, opt.trials, opt.seed);
    if (check.common) throw PreconditionError("polynomials share a factor: " + check.detail);
  }
  std::vector<LocalCount> counts;
  for (auto p : primes_up_to(cutoff)) counts.push_back(count_common_zeros(F, G, p, opt.budget));
  return euler_product(counts, static_cast<unsigned>(vars.size()), cutoff);
}

EulerProduct squarefree_density_A(const APoly& f, unsigned degree_cutoff, const ProductOptions& opt) {
  if (f.is_zero()) throw DomainError("squarefree_density: zero polynomial");
  if (!opt.override_check) {
    const auto check = heuristic_squarefree_check(f, opt.trials, opt.seed);
    if (check.outcome == SquarefreeCheck::Outcome::fail) {
      throw PreconditionError("polynomial is not squarefree: " + check.detail);
    }
  }
  std::vector<LocalCount> counts;
  for (unsigned d = 1; d <= degree_cutoff; ++d) {
    for (const auto& pi : irreducibles_of_degree(f.ring(), d, opt.budget)) {
      counts.push_back(count_zeros_hensel(f, pi, opt.budget));
    }
  }
  auto out = euler_product(counts, static_cast<unsigned>(2 * f.arity()), degree_cutoff);
  out.degree_cutoff = true;
  return out;
}

EulerProduct coprime_density_A(const APoly& f, const APoly& g, unsigned degree_cutoff, const ProductOptions& opt) {
  if (f.is_zero() || g.is_zero()) throw DomainError("coprime_density: zero polynomial");
  const auto vars = merge_variables(f.variables(), g.variables());
  const APoly F = f.with_variables(vars), G = g.with_variables(vars);
  if (!opt.override_check) {
    const auto check = heuristic_common_factor_check(F, G, opt.trials, opt.seed);
    if (check.common) throw PreconditionError("polynomials share a factor: " + check.detail);
  }
  std::vector<LocalCount> counts;
  for (unsigned d = 1; d <= degree_cutoff; ++d) {
    for (const auto& pi : irreducibles_of_degree(F.ring(), d, opt.budget)) {
      counts.push_back(count_common_zeros(F, G, pi, opt.budget));
    }
  }
  auto out = euler_product(counts, static_cast<unsigned>(vars.size()), degree_cutoff);
  out.degree_cutoff = true;
  return out;
}

// ---------------------------------------------------------------------------

Predicate Predicate::squarefree(AnyPoly f) {
  Predicate p;
  p.kind = Kind::squarefree;
  p.f = std::move(f);
  return p;
}

Predicate Predicate::coprime(AnyPoly f, AnyPoly g) {
  if (f.index() != g.index()) throw DomainError("coprime predicate: polynomials over different rings");
  Predicate p;
  p.kind = Kind::coprime;
  std::visit(
      [&](const auto& a) {
        using P = std::decay_t<decltype(a)>;
        const auto& b = std::get<P>(g);
        if (!(a.ring() == b.ring())) throw DomainError("coprime predicate: polynomials over different rings");
        const auto vars = merge_variables(a.variables(), b.variables());
        p.f = a.with_variables(vars);
        p.g = b.with_variables(vars);
      },
      f);
  return p;
}

Predicate Predicate::zero(AnyPoly f) {
  Predicate p;
  p.kind = Kind::zero;
  p.f = std::move(f);
  return p;
}

Predicate Predicate::custom_z(std::size_t arity, std::function<bool(const std::vector<Int>&)> fn) {
  if (arity == 0) throw DomainError("custom predicate: arity must be positive");
  Predicate p;
  p.kind = Kind::custom;
  p.custom = std::move(fn);
  p.custom_arity = arity;
  return p;
}

std::size_t Predicate::arity() const {
  if (kind == Kind::custom) return custom_arity;
  return std::visit([](const auto& a) { return a.arity(); }, f);
}

bool Predicate::over_integers() const { return kind == Kind::custom || std::holds_alternative<ZPoly>(f); }

std::string Predicate::name() const {
  auto show = [](const AnyPoly& p) { return std::visit([](const auto& a) { return render(a); }, p); };
  switch (kind) {
    case Kind::squarefree: return "squarefree(" + show(f) + ")";
    case Kind::coprime: return "coprime(" + show(f) + ", " + show(*g) + ")";
    case Kind::zero: return "zero(" + show(f) + ")";
    case Kind::custom: return "custom";
  }
  return "?";
}

namespace {

std::uint64_t checked_ratio_bound(double base, double ratio) {
  const double v = std::ceil(base * ratio);
  if (!(v < 9.0e18)) throw BudgetError("box dimension overflows");
  return static_cast<std::uint64_t>(v);
}

// Degree increase that multiplies the number of values by at least `ratio`.
std::uint64_t degree_step(double ratio, std::uint32_t q) {
  return static_cast<std::uint64_t>(std::ceil(std::log(ratio) / std::log(static_cast<double>(q)) - 1e-12));
}

}  // namespace

std::vector<std::uint64_t> materialize(const BoxSpec& box, std::uint32_t q) {
  const std::size_t n = box.dims.size();
  if (n == 0) throw DomainError("box needs at least one dimension");
  if (q == 0) {
    for (auto b : box.dims) {
      if (b == 0) throw DomainError("box dimensions must be positive");
    }
  }
  std::vector<std::uint64_t> dims = box.dims;
  switch (box.regime) {
    case Regime::unrestricted: break;
    case Regime::last_large: {
      if (!(box.ratio > 1)) throw DomainError("last_large ratio must exceed 1");
      if (n < 2) break;
      const std::uint64_t m = *std::max_element(dims.begin(), dims.end() - 1);
      dims[n - 1] = q == 0 ? checked_ratio_bound(static_cast<double>(m), box.ratio) : m + degree_step(box.ratio, q);
      break;
    }
    case Regime::nested: {
      std::vector<std::size_t> order = box.order;
      if (order.empty()) {
        order.resize(n);
        std::iota(order.begin(), order.end(), 0);
      }
      std::vector<std::size_t> sorted = order;
      std::sort(sorted.begin(), sorted.end());
      for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sorted.size() != n || sorted[i] != i) throw DomainError("nested order must be a permutation of the coordinates");
      }
      std::vector<double> ratios = box.ratios;
      if (ratios.empty()) ratios.assign(n - 1, box.ratio);
      if (ratios.size() != n - 1) throw DomainError("nested regime needs one ratio per consecutive pair");
      for (double r : ratios) {
        if (!(r > 1)) throw DomainError("nested ratios must exceed 1");
      }
      for (std::size_t k = 0; k + 1 < n; ++k) {
        const std::uint64_t prev = dims[order[k]];
        dims[order[k + 1]] =
            q == 0 ? checked_ratio_bound(static_cast<double>(prev), ratios[k]) : prev + degree_step(ratios[k], q);
      }
      break;
    }
  }
  return dims;
}

namespace {

// Exact |f(a)| < 2^63 evaluation in machine integers when the box allows it.
class MachineEval {
 public:
  MachineEval(const ZPoly& f, const std::vector<std::uint64_t>& bounds) {
    arity_ = f.arity();
    degree_.assign(arity_, 0);
    Int bound = 0;
    for (const auto& [e, c] : f.terms()) {
      if (!c.fits_slong_p()) return;
      Int mono = abs(c);
      for (std::size_t i = 0; i < arity_; ++i) {
        degree_[i] = std::max(degree_[i], e[i]);
        if (e[i]) mono *= int_pow(Int(std::to_string(bounds[i])), e[i]);
      }
      bound += mono;
      terms_.push_back({c.get_si(), e});
    }
    ok_ = bound < (Int(1) << 62);
    std::size_t total = 0;
    for (std::size_t i = 0; i < arity_; ++i) {
      offset_.push_back(total);
      total += degree_[i] + 1;
    }
    width_ = total;
  }

  bool ok() const { return ok_; }
  std::size_t scratch_size() const { return width_; }

  std::int64_t operator()(const std::int64_t* x, std::int64_t* pw) const {
    for (std::size_t i = 0; i < arity_; ++i) {
      std::int64_t* p = pw + offset_[i];
      p[0] = 1;
      for (unsigned k = 1; k <= degree_[i]; ++k) p[k] = p[k - 1] * x[i];
    }
    __int128 acc = 0;
    for (const auto& t : terms_) {
      __int128 v = t.c;
      for (std::size_t i = 0; i < arity_; ++i) {
        if (t.e[i]) v *= pw[offset_[i] + t.e[i]];
      }
      acc += v;
    }
    return static_cast<std::int64_t>(acc);
  }

 private:
  struct Term {
    std::int64_t c;
    Exponents e;
  };
  bool ok_ = false;
  std::size_t arity_ = 0, width_ = 0;
  std::vector<unsigned> degree_;
  std::vector<std::size_t> offset_;
  std::vector<Term> terms_;
};

std::uint64_t magnitude(std::int64_t v) {
  return v < 0 ? static_cast<std::uint64_t>(0) - static_cast<std::uint64_t>(v) : static_cast<std::uint64_t>(v);
}

// Tests one point of a box over Z given per-coordinate indices.
class IntegerTester {
 public:
  IntegerTester(const Predicate& pred, const std::vector<std::uint64_t>& dims, bool signed_box)
      : pred_(pred), dims_(dims), signed_(signed_box), n_(dims.size()) {
    if (pred.kind != Predicate::Kind::custom) {
      f_ = &std::get<ZPoly>(pred.f);
      fast_f_.emplace(*f_, dims);
      if (pred.g) {
        g_ = &std::get<ZPoly>(*pred.g);
        fast_g_.emplace(*g_, dims);
      }
    }
    fast_ = f_ && fast_f_->ok() && (!g_ || fast_g_->ok());
    x_.resize(n_);
    if (fast_f_) pw_.resize(std::max(fast_f_->scratch_size(), fast_g_ ? fast_g_->scratch_size() : 0));
  }

  std::int64_t value(std::size_t i, std::uint64_t idx) const {
    const auto b = static_cast<std::int64_t>(dims_[i]);
    const auto k = static_cast<std::int64_t>(idx);
    if (!signed_) return k + 1;
    return k < b ? k - b : k - b + 1;
  }

  bool operator()(const std::uint64_t* idx) {
    for (std::size_t i = 0; i < n_; ++i) x_[i] = value(i, idx[i]);
    if (fast_) {
      const std::int64_t v = (*fast_f_)(x_.data(), pw_.data());
      switch (pred_.kind) {
        case Predicate::Kind::squarefree: return v != 0 && is_squarefree_u64(magnitude(v));
        case Predicate::Kind::zero: return v == 0;
        case Predicate::Kind::coprime: {
          const std::int64_t w = (*fast_g_)(x_.data(), pw_.data());
          return std::gcd(magnitude(v), magnitude(w)) == 1;
        }
        case Predicate::Kind::custom: break;
      }
    }
    big_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) big_[i] = static_cast<long>(x_[i]);
    switch (pred_.kind) {
      case Predicate::Kind::custom: return pred_.custom(big_);
      case Predicate::Kind::squarefree: {
        const Int v = f_->evaluate(big_);
        return v != 0 && is_squarefree(v);
      }
      case Predicate::Kind::zero: return f_->evaluate(big_) == 0;
      case Predicate::Kind::coprime: return gcd(f_->evaluate(big_), g_->evaluate(big_)) == 1;
    }
    return false;
  }

 private:
  const Predicate& pred_;
  const std::vector<std::uint64_t>& dims_;
  bool signed_;
  std::size_t n_;
  const ZPoly* f_ = nullptr;
  const ZPoly* g_ = nullptr;
  std::optional<MachineEval> fast_f_, fast_g_;
  bool fast_ = false;
  std::vector<std::int64_t> x_, pw_;
  std::vector<Int> big_;
};

// Tests one point of a box over F_q[t]; coordinate i ranges over the q^(D_i+1)
// polynomials of degree <= D_i in index order.
class PolyTester {
 public:
  PolyTester(const Predicate& pred, const std::vector<std::uint64_t>& dims) : pred_(pred), n_(dims.size()) {
    if (pred.kind == Predicate::Kind::custom) throw DomainError("custom predicates are only available over Z");
    f_ = &std::get<APoly>(pred.f);
    if (pred.g) g_ = &std::get<APoly>(*pred.g);
    x_.resize(n_);
  }

  bool operator()(const std::uint64_t* idx) {
    const FqtRing& ring = f_->ring();
    for (std::size_t i = 0; i < n_; ++i) x_[i] = ring.from_index(idx[i]);
    const FqPoly v = f_->evaluate(x_);
    switch (pred_.kind) {
      case Predicate::Kind::squarefree: return !v.is_zero() && ring.is_squarefree(v);
      case Predicate::Kind::zero: return v.is_zero();
      case Predicate::Kind::coprime: {
        const FqPoly w = g_->evaluate(x_);
        if (v.is_zero() && w.is_zero()) return false;
        return ring.gcd(v, w).degree() == 0;
      }
      case Predicate::Kind::custom: break;
    }
    return false;
  }

 private:
  const Predicate& pred_;
  std::size_t n_;
  const APoly* f_ = nullptr;
  const APoly* g_ = nullptr;
  std::vector<FqPoly> x_;
};

constexpr std::uint64_t kShards = 16;

template <class Work>
void run_workers(unsigned threads, Work& work) {
  if (threads <= 1) {
    work();
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < threads; ++i) pool.emplace_back([&] { work(); });
  for (auto& t : pool) t.join();
}

template <class Tester>
std::uint64_t run_exhaustive(const std::vector<std::uint64_t>& sizes, std::uint64_t total, unsigned threads,
                             const std::function<Tester()>& make) {
  const std::size_t n = sizes.size();
  const std::uint64_t chunk = std::max<std::uint64_t>(1, std::min<std::uint64_t>(total / (64 * threads) + 1, 1 << 20));
  std::atomic<std::uint64_t> next{0}, hits{0};
  auto work = [&]() {
    Tester test = make();
    std::vector<std::uint64_t> idx(n);
    std::uint64_t local = 0;
    for (;;) {
      const std::uint64_t start = next.fetch_add(chunk);
      if (start >= total) break;
      const std::uint64_t end = std::min(total, start + chunk);
      std::uint64_t rest = start;
      for (std::size_t i = n; i-- > 0;) {
        idx[i] = rest % sizes[i];
        rest /= sizes[i];
      }
      for (std::uint64_t k = start; k < end; ++k) {
        if (test(idx.data())) ++local;
        for (std::size_t i = n; i-- > 0;) {
          if (++idx[i] < sizes[i]) break;
          idx[i] = 0;
        }
      }
    }
    hits += local;
  };
  run_workers(threads, work);
  return hits.load();
}

template <class Tester>
std::uint64_t run_monte_carlo(const std::vector<std::uint64_t>& sizes, std::uint64_t samples, std::uint64_t seed,
                              unsigned threads, const std::function<Tester()>& make) {
  std::atomic<std::uint64_t> next{0}, hits{0};
  auto work = [&]() {
    Tester test = make();
    std::vector<std::uint64_t> idx(sizes.size());
    std::uint64_t local = 0;
    for (;;) {
      const std::uint64_t shard = next.fetch_add(1);
      if (shard >= kShards) break;
      const std::uint64_t count = samples / kShards + (shard < samples % kShards ? 1 : 0);
      Xoshiro256 rng = Xoshiro256::for_shard(seed, shard);
      for (std::uint64_t s = 0; s < count; ++s) {
        for (std::size_t i = 0; i < sizes.size(); ++i) idx[i] = rng.below(sizes[i]);
        if (test(idx.data())) ++local;
      }
    }
    hits += local;
  };
  run_workers(threads, work);
  return hits.load();
}

}  // namespace

DensityEstimate empirical_density(const Predicate& pred, const BoxSpec& box) {
  const std::size_t n = pred.arity();
  if (box.dims.size() != n) {
    throw DomainError("box has " + std::to_string(box.dims.size()) + " dimensions but the predicate has arity " +
                      std::to_string(n));
  }
  const bool integers = pred.over_integers();
  const std::uint32_t q = integers ? 0 : std::get<APoly>(pred.f).ring().q();
  if (!integers && box.signed_box) throw DomainError("signed boxes apply only over Z");
  if (box.mode == SampleMode::monte_carlo && box.samples == 0) throw DomainError("Monte Carlo needs at least one sample");

  DensityEstimate out;
  out.mode = box.mode;
  out.dims = materialize(box, q);
  out.seed = box.seed;

  // Values per coordinate, and the box cardinality.
  std::vector<std::uint64_t> sizes(n);
  Int card = 1;
  for (std::size_t i = 0; i < n; ++i) {
    Int s;
    if (integers) {
      s = Int(std::to_string(out.dims[i])) * (box.signed_box ? 2 : 1);
    } else {
      mpz_ui_pow_ui(s.get_mpz_t(), q, out.dims[i] + 1);
    }
    if (!s.fits_ulong_p() || s > Int(std::to_string(std::uint64_t{1} << 62))) {
      throw BudgetError("box coordinate " + std::to_string(i) + " is too large");
    }
    sizes[i] = s.get_ui();
    card *= s;
  }

  const unsigned threads = std::max(1u, box.threads);
  if (box.mode == SampleMode::exhaustive) {
    if (card > Int(std::to_string(box.budget))) {
      throw BudgetError("box of " + card.get_str() + " points exceeds the budget of " + std::to_string(box.budget));
    }
    out.total = card.get_ui();
  } else {
    if (box.samples > box.budget) throw BudgetError("sample count exceeds the budget");
    out.total = box.samples;
  }

  if (integers) {
    std::function<IntegerTester()> make = [&] { return IntegerTester(pred, out.dims, box.signed_box); };
    out.hits = box.mode == SampleMode::exhaustive ? run_exhaustive(sizes, out.total, threads, make)
                                                  : run_monte_carlo(sizes, out.total, box.seed, threads, make);
  } else {
    std::function<PolyTester()> make = [&] { return PolyTester(pred, out.dims); };
    out.hits = box.mode == SampleMode::exhaustive ? run_exhaustive(sizes, out.total, threads, make)
                                                  : run_monte_carlo(sizes, out.total, box.seed, threads, make);
  }
  out.ratio = static_cast<double>(out.hits) / static_cast<double>(out.total);
  if (box.mode == SampleMode::monte_carlo) {
    out.half_width = 3 * std::sqrt(out.ratio * (1 - out.ratio) / static_cast<double>(out.total));
  }
  return out;
}

WeakDensity empirical_density_weak(const Predicate& pred, const BoxSpec& box,
                                   std::vector<std::vector<std::size_t>> orders) {
  const std::size_t n = box.dims.size();
  if (orders.empty()) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      orders.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  WeakDensity out;
  out.orders = orders;
  for (const auto& order : orders) {
    BoxSpec nested = box;
    nested.regime = Regime::nested;
    nested.order = order;
    out.estimates.push_back(empirical_density(pred, nested));
    if (out.estimates.back().ratio > out.estimates[out.best].ratio) out.best = out.estimates.size() - 1;
  }
  return out;
}

DensityEstimate squarefree_count_A(std::uint32_t q, unsigned D, std::uint64_t budget) {
  const FqtRing ring(q);
  BoxSpec box;
  box.dims = {D};
  box.budget = budget;
  return empirical_density(Predicate::squarefree(APoly::variable(ring, {"x"}, 0)), box);
}

}  // namespace sqd
