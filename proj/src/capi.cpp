#include "sqdense/sqdense.h"

#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <sstream>
#include <string>

#include "json.hpp"
#include "sqdense/density.hpp"
#include "sqdense/ecdisc.hpp"
#include "sqdense/localcount.hpp"
#include "sqdense/qclasses.hpp"

struct sqd_poly {
  sqd::AnyPoly poly;
};

struct sqd_result {
  std::string json;
  std::string csv;
  double value = std::nan("");
};

namespace {

using json = nlohmann::ordered_json;
using namespace sqd;

constexpr const char* kVersion = "0.1.0";
constexpr const char* kSchema = "sqdense/1";
// Products with more factors than this report them only by count.
constexpr std::size_t kMaxListedFactors = 1000;

thread_local std::string g_last_error;

sqd_status fail(sqd_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs fn, translating exceptions into status codes.
sqd_status guarded(const std::function<void()>& fn) {
  g_last_error.clear();
  try {
    fn();
    return SQD_OK;
  } catch (const Error& e) {
    switch (e.kind()) {
      case ErrorKind::parse: return fail(SQD_ERR_PARSE, e.what());
      case ErrorKind::precondition: return fail(SQD_ERR_PRECONDITION, e.what());
      case ErrorKind::budget: return fail(SQD_ERR_BUDGET, e.what());
      case ErrorKind::domain: return fail(SQD_ERR_DOMAIN, e.what());
      case ErrorKind::internal: return fail(SQD_ERR_INTERNAL, e.what());
    }
    return fail(SQD_ERR_INTERNAL, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SQD_ERR_BUDGET, "out of memory");
  } catch (const std::exception& e) {
    return fail(SQD_ERR_INTERNAL, e.what());
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

std::string render_any(const AnyPoly& p) {
  return std::visit([](const auto& f) { return render(f); }, p);
}

json ring_json(const AnyPoly& p) {
  if (const auto* a = std::get_if<APoly>(&p)) return "F_" + std::to_string(a->ring().q()) + "[t]";
  return "Z";
}

// Integers that fit a double exactly stay numbers; larger ones become strings.
json int_json(const Int& n) {
  if (abs(n) < (Int(1) << 53)) return n.get_si();
  return n.get_str();
}

json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

std::string digits(const Real& v) {
  std::ostringstream os;
  os.precision(36);
  os << v;
  return os.str();
}

json base_report(const char* command, json inputs) {
  json j;
  j["schema"] = kSchema;
  j["version"] = kVersion;
  j["command"] = command;
  j["inputs"] = std::move(inputs);
  j["value"] = nullptr;
  j["cutoff"] = nullptr;
  j["tail"] = nullptr;
  return j;
}

void put_product(json& j, const EulerProduct& e) {
  j["value"] = e.value_double();
  j["cutoff"] = e.cutoff;
  j["tail"] = {{"low", finite_or_null(e.tail_low)}, {"high", finite_or_null(e.tail_high)}, {"rigorous", false}};
  if (e.factors.size() <= kMaxListedFactors) {
    json list = json::array();
    for (const auto& f : e.factors) list.push_back({f.prime, int_json(f.c), f.factor.convert_to<double>()});
    j["factors"] = std::move(list);
  }
  json d;
  d["value_digits"] = digits(e.value);
  d["factor_count"] = e.factors.size();
  d["norm_exponent"] = e.norm_exponent;
  d["cutoff_kind"] = e.degree_cutoff ? "degree" : "prime";
  d["kappa"] = e.kappa;
  d["zero_at"] = e.zero_at ? json(*e.zero_at) : json(nullptr);
  j["details"] = std::move(d);
}

const char* mode_name(SampleMode m) { return m == SampleMode::exhaustive ? "exhaustive" : "monte_carlo"; }

json estimate_json(const DensityEstimate& e) {
  return {{"hits", e.hits}, {"total", e.total}, {"ratio", e.ratio}, {"half_width", e.half_width}, {"dims", e.dims}};
}

void put_estimate(json& j, const DensityEstimate& e) {
  j["value"] = e.ratio;
  j["hits"] = e.hits;
  j["total"] = e.total;
  j["ratio"] = e.ratio;
  j["half_width"] = e.half_width;
  if (e.mode == SampleMode::monte_carlo) j["seed"] = e.seed;
  j["details"]["dims"] = e.dims;
  j["details"]["mode"] = mode_name(e.mode);
}

sqd_result* finish(json j, std::chrono::steady_clock::time_point start, std::string csv = {}) {
  const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  j["elapsed_ms"] = std::round(elapsed * 1000) / 1000;
  auto* r = new sqd_result;
  r->value = j["value"].is_number() ? j["value"].get<double>() : std::nan("");
  r->json = j.dump();
  r->csv = std::move(csv);
  return r;
}

std::vector<std::string> split_vars(const char* vars) {
  std::vector<std::string> out;
  if (!vars) return out;
  std::string cur;
  for (const char* c = vars; *c; ++c) {
    if (*c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (*c != ' ') {
      cur += *c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

ProductOptions product_options(const sqd_options* o) {
  ProductOptions p;
  p.override_check = o->override_check != 0;
  p.trials = o->trials;
  p.seed = o->seed;
  p.budget = o->budget;
  return p;
}

BoxSpec box_spec(const sqd_box* b) {
  BoxSpec box;
  require(b->dims != nullptr && b->n > 0, "box needs dimensions");
  box.dims.assign(b->dims, b->dims + b->n);
  switch (b->regime) {
    case SQD_REGIME_FLAT: box.regime = Regime::unrestricted; break;
    case SQD_REGIME_LAST_LARGE: box.regime = Regime::last_large; break;
    case SQD_REGIME_NESTED: box.regime = Regime::nested; break;
    default: throw DomainError("unknown regime");
  }
  box.ratio = b->ratio;
  if (b->order) box.order.assign(b->order, b->order + b->n);
  if (b->ratios && b->n > 1) box.ratios.assign(b->ratios, b->ratios + b->n - 1);
  box.mode = b->mode == SQD_MODE_MONTE_CARLO ? SampleMode::monte_carlo : SampleMode::exhaustive;
  box.samples = b->samples;
  box.seed = b->seed;
  box.signed_box = b->signed_box != 0;
  box.threads = b->threads;
  box.budget = b->budget;
  return box;
}

const char* regime_name(sqd_regime r) {
  switch (r) {
    case SQD_REGIME_FLAT: return "flat";
    case SQD_REGIME_LAST_LARGE: return "last_large";
    case SQD_REGIME_NESTED: return "nested";
  }
  return "?";
}

json box_inputs(const sqd_box* b) {
  json j;
  j["box"] = std::vector<std::uint64_t>(b->dims, b->dims + b->n);
  j["regime"] = regime_name(b->regime);
  if (b->regime != SQD_REGIME_FLAT) j["ratio"] = b->ratio;
  if (b->order) j["order"] = std::vector<std::size_t>(b->order, b->order + b->n);
  if (b->ratios && b->n > 1) j["ratios"] = std::vector<double>(b->ratios, b->ratios + b->n - 1);
  if (b->all_orders) j["all_orders"] = true;
  j["mode"] = b->mode == SQD_MODE_MONTE_CARLO ? "monte_carlo" : "exhaustive";
  if (b->mode == SQD_MODE_MONTE_CARLO) {
    j["samples"] = b->samples;
    j["seed"] = b->seed;
  }
  if (b->signed_box) j["signed"] = true;
  return j;
}

const ZPoly& integer_poly(const sqd_poly* p, const char* what) {
  const auto* z = std::get_if<ZPoly>(&p->poly);
  if (!z) throw DomainError(std::string(what) + " needs an integer polynomial");
  return *z;
}

json local_count_json(const LocalCount& c) {
  json j{{"prime", c.label},       {"norm", int_json(c.norm())}, {"count", int_json(c.count)},
         {"power", c.power},       {"method", to_string(c.method)}};
  if (c.method == CountMethod::hensel) {
    j["smooth"] = int_json(c.smooth_zeros);
    j["singular"] = int_json(c.singular_zeros);
    j["singular_lifting"] = int_json(c.singular_lifting);
  }
  return j;
}

Rational parse_rational(const char* text) {
  require(text != nullptr && *text, "missing rational");
  Rational q;
  if (q.set_str(text, 10) != 0) throw ParseError(std::string("not a rational number: '") + text + "'", 1, 1);
  q.canonicalize();
  return q;
}

}  // namespace

extern "C" {

const char* sqd_version(void) { return kVersion; }

const char* sqd_last_error(void) { return g_last_error.c_str(); }

const char* sqd_status_name(sqd_status status) {
  switch (status) {
    case SQD_OK: return "ok";
    case SQD_ERR_INTERNAL: return "internal";
    case SQD_ERR_PARSE: return "parse";
    case SQD_ERR_PRECONDITION: return "precondition";
    case SQD_ERR_BUDGET: return "budget";
    case SQD_ERR_DOMAIN: return "domain";
    case SQD_ERR_ARGUMENT: return "argument";
  }
  return "unknown";
}

sqd_status sqd_poly_parse(const char* text, uint32_t q, const char* vars, sqd_poly** out) {
  if (!text || !out) return fail(SQD_ERR_ARGUMENT, "sqd_poly_parse: null argument");
  *out = nullptr;
  return guarded([&] {
    const auto names = split_vars(vars);
    auto* p = new sqd_poly{q == 0 ? AnyPoly(parse_zpoly(text, names)) : AnyPoly(parse_apoly(text, FqtRing(q), names))};
    *out = p;
  });
}

void sqd_poly_free(sqd_poly* poly) { delete poly; }

sqd_status sqd_poly_render(const sqd_poly* poly, char** out) {
  if (!poly || !out) return fail(SQD_ERR_ARGUMENT, "sqd_poly_render: null argument");
  return guarded([&] { *out = strdup(render_any(poly->poly).c_str()); });
}

size_t sqd_poly_arity(const sqd_poly* poly) {
  if (!poly) return 0;
  return std::visit([](const auto& f) { return f.arity(); }, poly->poly);
}

uint32_t sqd_poly_field(const sqd_poly* poly) {
  if (!poly) return 0;
  if (const auto* a = std::get_if<APoly>(&poly->poly)) return a->ring().q();
  return 0;
}

void sqd_string_free(char* text) { free(text); }

sqd_status sqd_check_squarefree(const sqd_poly* f, unsigned trials, uint64_t seed, int* passed, char** witness) {
  if (!f || !passed) return fail(SQD_ERR_ARGUMENT, "sqd_check_squarefree: null argument");
  if (witness) *witness = nullptr;
  return guarded([&] {
    const SquarefreeCheck check =
        std::visit([&](const auto& p) { return heuristic_squarefree_check(p, trials, seed); }, f->poly);
    *passed = check.outcome != SquarefreeCheck::Outcome::fail;
    if (!*passed && witness) {
      std::string w = check.detail;
      if (!check.specialization.empty()) {
        w += " (other variables =";
        for (const auto& v : check.specialization) w += " " + v;
        w += ")";
      }
      *witness = strdup(w.c_str());
    }
  });
}

sqd_status sqd_check_coprime(const sqd_poly* f, const sqd_poly* g, unsigned trials, uint64_t seed, int* coprime,
                             char** witness) {
  if (!f || !g || !coprime) return fail(SQD_ERR_ARGUMENT, "sqd_check_coprime: null argument");
  if (witness) *witness = nullptr;
  return guarded([&] {
    const Predicate pred = Predicate::coprime(f->poly, g->poly);
    const CommonFactorCheck check = std::visit(
        [&](const auto& a) {
          using P = std::decay_t<decltype(a)>;
          return heuristic_common_factor_check(a, std::get<P>(*pred.g), trials, seed);
        },
        pred.f);
    *coprime = !check.common;
    if (check.common && witness) *witness = strdup(check.detail.c_str());
  });
}

void sqd_options_init(sqd_options* opts) {
  if (!opts) return;
  opts->cutoff = 10000;
  opts->deg_cutoff = 4;
  opts->seed = 1;
  opts->trials = 20;
  opts->override_check = 0;
  opts->budget = kDefaultBudget;
  opts->threads = 1;
}

void sqd_box_init(sqd_box* box) {
  if (!box) return;
  box->dims = nullptr;
  box->n = 0;
  box->regime = SQD_REGIME_FLAT;
  box->ratio = 32;
  box->order = nullptr;
  box->ratios = nullptr;
  box->all_orders = 0;
  box->mode = SQD_MODE_EXHAUSTIVE;
  box->samples = 0;
  box->seed = 1;
  box->signed_box = 0;
  box->threads = 1;
  box->budget = kDefaultBudget;
}

sqd_status sqd_squarefree_product(const sqd_poly* f, const sqd_options* opts, sqd_result** out) {
  if (!f || !opts || !out) return fail(SQD_ERR_ARGUMENT, "sqd_squarefree_product: null argument");
  *out = nullptr;
  return guarded([&] {
    const auto start = std::chrono::steady_clock::now();
    const ProductOptions po = product_options(opts);
    json inputs{{"poly", render_any(f->poly)}, {"ring", ring_json(f->poly)}};
    EulerProduct e;
    const char* command = "sf-z";
    if (const auto* z = std::get_if<ZPoly>(&f->poly)) {
      inputs["cutoff"] = opts->cutoff;
      e = squarefree_density_Z(*z, opts->cutoff, po);
    } else {
      command = "sf-a";
      inputs["deg_cutoff"] = opts->deg_cutoff;
      e = squarefree_density_A(std::get<APoly>(f->poly), opts->deg_cutoff, po);
    }
    if (po.override_check) inputs["override_check"] = true;
    json j = base_report(command, std::move(inputs));
    put_product(j, e);
    *out = finish(std::move(j), start);
  });
}

sqd_status sqd_coprime_product(const sqd_poly* f, const sqd_poly* g, const sqd_options* opts, sqd_result** out) {
  if (!f || !g || !opts || !out) return fail(SQD_ERR_ARGUMENT, "sqd_coprime_product: null argument");
  *out = nullptr;
  return guarded([&] {
    const auto start = std::chrono::steady_clock::now();
    const ProductOptions po = product_options(opts);
    if (f->poly.index() != g->poly.index()) throw DomainError("coprime: polynomials over different rings");
    json inputs{{"poly", render_any(f->poly)}, {"poly2", render_any(g->poly)}, {"ring", ring_json(f->poly)}};
    EulerProduct e;
    if (const auto* z = std::get_if<ZPoly>(&f->poly)) {
      inputs["cutoff"] = opts->cutoff;
      e = coprime_density(*z, std::get<ZPoly>(g->poly), opts->cutoff, po);
    } else {
      inputs["deg_cutoff"] = opts->deg_cutoff;
      e = coprime_density_A(std::get<APoly>(f->poly), std::get<APoly>(g->poly), opts->deg_cutoff, po);
    }
    json j = base_report("coprime", std::move(inputs));
    put_product(j, e);
    *out = finish(std::move(j), start);
  });
}

sqd_status sqd_empirical(sqd_predicate pred, const sqd_poly* f, const sqd_poly* g, const sqd_box* box,
                         sqd_result** out) {
  if (!f || !box || !out) return fail(SQD_ERR_ARGUMENT, "sqd_empirical: null argument");
  if (pred == SQD_PRED_COPRIME && !g) return fail(SQD_ERR_ARGUMENT, "sqd_empirical: coprime needs two polynomials");
  *out = nullptr;
  return guarded([&] {
    const auto start = std::chrono::steady_clock::now();
    Predicate p;
    switch (pred) {
      case SQD_PRED_SQUAREFREE: p = Predicate::squarefree(f->poly); break;
      case SQD_PRED_COPRIME: p = Predicate::coprime(f->poly, g->poly); break;
      case SQD_PRED_ZERO: p = Predicate::zero(f->poly); break;
      default: throw DomainError("unknown predicate");
    }
    json inputs = box_inputs(box);
    inputs["predicate"] = p.name();
    inputs["ring"] = ring_json(f->poly);
    const BoxSpec spec = box_spec(box);
    json j = base_report("empirical", std::move(inputs));
    if (box->regime == SQD_REGIME_NESTED && box->all_orders) {
      const WeakDensity weak = empirical_density_weak(p, spec);
      put_estimate(j, weak.estimates[weak.best]);
      json runs = json::array();
      for (std::size_t i = 0; i < weak.orders.size(); ++i) {
        json r = estimate_json(weak.estimates[i]);
        r["order"] = weak.orders[i];
        runs.push_back(std::move(r));
      }
      j["details"]["orders"] = std::move(runs);
      j["details"]["best_order"] = weak.orders[weak.best];
    } else {
      put_estimate(j, empirical_density(p, spec));
    }
    *out = finish(std::move(j), start);
  });
}

sqd_status sqd_local_counts(const sqd_poly* f, const sqd_poly* g, unsigned power, int method,
                            const sqd_options* opts, sqd_result** out) {
  if (!f || !opts || !out) return fail(SQD_ERR_ARGUMENT, "sqd_local_counts: null argument");
  *out = nullptr;
  return guarded([&] {
    const auto start = std::chrono::steady_clock::now();
    require(power == 1 || power == 2, "local counts use power 1 or 2");
    require(method == 0 || method == 1, "method must be 0 (Hensel) or 1 (brute)");
    if (g) require(power == 1, "common zeros are counted mod the prime (power 1)");
    if (method == 0 && !g) require(power == 2, "the Hensel count is mod the square of the prime");
    json inputs{{"poly", render_any(f->poly)}, {"ring", ring_json(f->poly)}, {"power", power},
                {"method", g ? "brute" : (method == 0 ? "hensel" : "brute")}};
    if (g) inputs["poly2"] = render_any(g->poly);
    json counts = json::array();
    std::optional<Predicate> pair;
    if (g) pair = Predicate::coprime(f->poly, g->poly);
    if (const auto* z = std::get_if<ZPoly>(&f->poly)) {
      inputs["cutoff"] = opts->cutoff;
      require(opts->cutoff < kMaxCountingPrime, "cutoff must be below 2^31");
      for (auto p : primes_up_to(opts->cutoff)) {
        LocalCount c;
        if (pair) {
          c = count_common_zeros(std::get<ZPoly>(pair->f), std::get<ZPoly>(*pair->g), p, opts->budget);
        } else if (method == 0) {
          c = count_zeros_hensel(*z, p, opts->budget);
        } else {
          c = count_zeros_brute(*z, p, power, opts->budget);
        }
        counts.push_back(local_count_json(c));
      }
    } else {
      const auto& a = std::get<APoly>(f->poly);
      inputs["deg_cutoff"] = opts->deg_cutoff;
      for (unsigned d = 1; d <= opts->deg_cutoff; ++d) {
        for (const auto& pi : irreducibles_of_degree(a.ring(), d, opts->budget)) {
          LocalCount c;
          if (pair) {
            c = count_common_zeros(std::get<APoly>(pair->f), std::get<APoly>(*pair->g), pi, opts->budget);
          } else if (method == 0) {
            c = count_zeros_hensel(a, pi, opts->budget);
          } else {
            c = count_zeros_brute(a, pi, power, opts->budget);
          }
          counts.push_back(local_count_json(c));
        }
      }
    }
    json j = base_report("local", std::move(inputs));
    j["details"]["counts"] = std::move(counts);
    *out = finish(std::move(j), start);
  });
}

sqd_status sqd_image_count(const sqd_poly* f, uint64_t bound, uint64_t prefix_step, sqd_result** out) {
  if (!f || !out) return fail(SQD_ERR_ARGUMENT, "sqd_image_count: null argument");
  *out = nullptr;
  return guarded([&] {
    const auto start = std::chrono::steady_clock::now();
    const ZPoly& z = integer_poly(f, "image");
    const ImageCount ic = image_count(z, bound, prefix_step);
    json j = base_report("image", {{"poly", render(z)}, {"bound", bound}});
    j["value"] = ic.ratio;
    j["hits"] = ic.distinct;
    j["total"] = ic.bound;
    j["ratio"] = ic.ratio;
    const CfConstant cf = c_f_constant(z);
    j["details"]["c_f"] = cf.value;
    std::string csv;
    if (!ic.per_prefix.empty()) {
      csv = "bound,distinct,ratio\n";
      for (const auto& p : ic.per_prefix) {
        std::ostringstream row;
        row.precision(17);
        row << p.bound << ',' << p.distinct << ',' << p.ratio << '\n';
        csv += row.str();
      }
      j["details"]["prefix_points"] = ic.per_prefix.size();
    }
    *out = finish(std::move(j), start, std::move(csv));
  });
}

sqd_status sqd_cf_constant(const sqd_poly* f, sqd_result** out) {
  if (!f || !out) return fail(SQD_ERR_ARGUMENT, "sqd_cf_constant: null argument");
  *out = nullptr;
  return guarded([&] {
    const auto start = std::chrono::steady_clock::now();
    const ZPoly& z = integer_poly(f, "cf");
    const auto dec = squarefree_decompose(z);
    const CfConstant cf = c_f_constant(z);
    json j = base_report("cf", {{"poly", render(z)}});
    j["value"] = cf.value;
    j["details"] = {{"deg_h", cf.deg_h},
                    {"c", int_json(dec.c)},
                    {"g", render(dec.g)},
                    {"h", render(dec.h)},
                    {"over_pi_squared", cf.deg_h == 1 ? json(cf.over_pi_squared.get_str()) : json(nullptr)}};
    *out = finish(std::move(j), start);
  });
}

sqd_status sqd_delta_table(uint64_t a, const char* b, sqd_result** out) {
  if (!b || !out) return fail(SQD_ERR_ARGUMENT, "sqd_delta_table: null argument");
  *out = nullptr;
  return guarded([&] {
    const auto start = std::chrono::steady_clock::now();
    Int bi;
    if (bi.set_str(b, 10) != 0) throw ParseError(std::string("not an integer: '") + b + "'", 1, 1);
    const DeltaTable t = delta_table(a, bi);
    json j = base_report("delta", {{"a", a}, {"b", int_json(bi)}});
    j["value"] = t.sum().get_d();
    json entries = json::array();
    for (std::uint64_t r = 0; r < t.a; ++r) {
      entries.push_back({{"r", r},
                         {"delta", t.delta[r].get_str()},
                         {"m", t.witness[r] ? json(*t.witness[r]) : json(nullptr)}});
    }
    j["details"] = {{"sum", t.sum().get_str()}, {"entries", std::move(entries)}};
    *out = finish(std::move(j), start);
  });
}

sqd_status sqd_collision_count(const sqd_poly* f, const char* q, uint64_t bound, sqd_result** out) {
  if (!f || !q || !out) return fail(SQD_ERR_ARGUMENT, "sqd_collision_count: null argument");
  *out = nullptr;
  return guarded([&] {
    const auto start = std::chrono::steady_clock::now();
    const ZPoly& z = integer_poly(f, "collide");
    const Rational qr = parse_rational(q);
    const std::uint64_t count = collision_count(z, qr, bound);
    json j = base_report("collide", {{"poly", render(z)}, {"q", qr.get_str()}, {"bound", bound}});
    j["value"] = count;
    j["hits"] = count;
    j["total"] = bound;
    j["ratio"] = static_cast<double>(count) / static_cast<double>(bound);
    *out = finish(std::move(j), start);
  });
}

sqd_status sqd_ec_gamma(uint32_t q, unsigned deg_cutoff, sqd_result** out) {
  if (!out) return fail(SQD_ERR_ARGUMENT, "sqd_ec_gamma: null argument");
  *out = nullptr;
  return guarded([&] {
    const auto start = std::chrono::steady_clock::now();
    const EcConstant g = gamma_q(q, deg_cutoff);
    const EcConstant r = rd_limit(q, deg_cutoff);
    json j = base_report("ec-gamma", {{"q", q}, {"deg_cutoff", deg_cutoff}});
    put_product(j, g.product);
    j["value"] = g.value_double();
    j["details"]["prefactor"] = g.prefactor.get_str();
    j["details"]["product"] = g.product.value_double();
    j["details"]["gamma_digits"] = digits(g.value);
    j["details"]["rd_limit"] = {{"prefactor", r.prefactor.get_str()}, {"value", r.value_double()}};
    *out = finish(std::move(j), start);
  });
}

sqd_status sqd_ec_empirical(uint32_t q, unsigned degree_bound, const sqd_box* sampling, unsigned product_cutoff,
                            sqd_result** out) {
  if (!out) return fail(SQD_ERR_ARGUMENT, "sqd_ec_empirical: null argument");
  *out = nullptr;
  return guarded([&] {
    const auto start = std::chrono::steady_clock::now();
    sqd_box local;
    sqd_box_init(&local);
    if (sampling) local = *sampling;
    BoxSpec spec;
    spec.mode = local.mode == SQD_MODE_MONTE_CARLO ? SampleMode::monte_carlo : SampleMode::exhaustive;
    spec.samples = local.samples;
    spec.seed = local.seed;
    spec.threads = local.threads;
    spec.budget = local.budget;
    json inputs{{"q", q}, {"degree_bound", degree_bound}, {"mode", mode_name(spec.mode)}};
    if (spec.mode == SampleMode::monte_carlo) {
      inputs["samples"] = spec.samples;
      inputs["seed"] = spec.seed;
    }
    if (product_cutoff) inputs["deg_cutoff"] = product_cutoff;
    const DensityEstimate e = empirical_disc_density(q, degree_bound, spec);
    json j = base_report("ec-empirical", std::move(inputs));
    put_estimate(j, e);
    j["details"]["discriminant"] = render(discriminant_poly(q));
    if (product_cutoff) {
      const EulerProduct p = squarefree_density_A(discriminant_poly(q), product_cutoff);
      j["cutoff"] = product_cutoff;
      j["tail"] = {{"low", finite_or_null(p.tail_low)}, {"high", finite_or_null(p.tail_high)}, {"rigorous", false}};
      j["details"]["product"] = p.value_double();
      j["details"]["difference"] = e.ratio - p.value_double();
    }
    *out = finish(std::move(j), start);
  });
}

const char* sqd_result_json(const sqd_result* result) { return result ? result->json.c_str() : ""; }

double sqd_result_value(const sqd_result* result) { return result ? result->value : std::nan(""); }

const char* sqd_result_csv(const sqd_result* result) { return result ? result->csv.c_str() : ""; }

void sqd_result_free(sqd_result* result) { delete result; }

}  // extern "C"
