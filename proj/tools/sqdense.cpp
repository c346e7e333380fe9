// Command-line front end over the sqdense C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sqdense/sqdense.h"

namespace {

using json = nlohmann::ordered_json;

enum Exit { kOk = 0, kInternal = 1, kUsage = 2, kPrecondition = 3, kBudget = 4 };

int exit_code(sqd_status s) {
  switch (s) {
    case SQD_OK: return kOk;
    case SQD_ERR_PARSE:
    case SQD_ERR_ARGUMENT: return kUsage;
    case SQD_ERR_PRECONDITION:
    case SQD_ERR_DOMAIN: return kPrecondition;
    case SQD_ERR_BUDGET: return kBudget;
    case SQD_ERR_INTERNAL: return kInternal;
  }
  return kInternal;
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ApiError : std::runtime_error {
  sqd_status status;
  ApiError(sqd_status s, const std::string& what) : std::runtime_error(what), status(s) {}
};

void check(sqd_status s) {
  if (s != SQD_OK) throw ApiError(s, sqd_last_error());
}

struct PolyDeleter {
  void operator()(sqd_poly* p) const { sqd_poly_free(p); }
};
struct ResultDeleter {
  void operator()(sqd_result* r) const { sqd_result_free(r); }
};
using PolyPtr = std::unique_ptr<sqd_poly, PolyDeleter>;
using ResultPtr = std::unique_ptr<sqd_result, ResultDeleter>;

struct Options {
  std::string poly, poly2, vars;
  std::uint32_t ring = 0;
  std::uint64_t cutoff = 10000;
  unsigned deg_cutoff = 4;
  std::string box;
  std::string regime = "flat";
  std::string ratios;
  std::string mode = "exhaustive";
  std::uint64_t seed = 1;
  unsigned trials = 20;
  std::string json_path, csv_path;
  bool quiet = false;
  bool dry_run = false;
  unsigned threads = 1;
  std::uint64_t budget = 0;
  bool signed_box = false;
  bool override_check = false;
  std::string predicate = "squarefree";
  std::uint64_t bound = 0;
  std::uint64_t step = 0;
  std::uint64_t a = 0;
  std::string b = "0";
  std::string q;
  std::uint32_t field = 5;
  unsigned degree = 4;
  std::string method = "hensel";
  unsigned power = 2;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::uint64_t to_u64(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    if (s.empty() || s[0] == '-') throw std::invalid_argument(s);
    const auto v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string("bad ") + what + ": '" + s + "'");
  }
}

double to_double(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !(v > 0)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string("bad ") + what + ": '" + s + "'");
  }
}

PolyPtr parse(const std::string& text, std::uint32_t ring, const std::string& vars, const char* flag) {
  if (text.empty()) throw UsageError(std::string(flag) + " is required");
  sqd_poly* p = nullptr;
  check(sqd_poly_parse(text.c_str(), ring, vars.empty() ? nullptr : vars.c_str(), &p));
  return PolyPtr(p);
}

std::string render(const sqd_poly* p) {
  char* s = nullptr;
  check(sqd_poly_render(p, &s));
  std::string out(s);
  sqd_string_free(s);
  return out;
}

sqd_options product_options(const Options& o) {
  sqd_options opts;
  sqd_options_init(&opts);
  opts.cutoff = o.cutoff;
  opts.deg_cutoff = o.deg_cutoff;
  opts.seed = o.seed;
  opts.trials = o.trials;
  opts.override_check = o.override_check;
  if (o.budget) opts.budget = o.budget;
  opts.threads = o.threads;
  return opts;
}

// Backing storage for the pointers inside sqd_box.
struct BoxArgs {
  std::vector<std::uint64_t> dims;
  std::vector<std::size_t> order;
  std::vector<double> ratios;
  sqd_box box{};
};

void parse_mode(const Options& o, sqd_box& box) {
  if (o.mode == "exhaustive") {
    box.mode = SQD_MODE_EXHAUSTIVE;
  } else if (o.mode.rfind("mc:", 0) == 0) {
    box.mode = SQD_MODE_MONTE_CARLO;
    box.samples = to_u64(o.mode.substr(3), "sample count");
    if (box.samples == 0) throw UsageError("mc needs a positive sample count");
  } else {
    throw UsageError("--mode must be exhaustive or mc:N");
  }
  box.seed = o.seed;
  box.threads = o.threads;
  if (o.budget) box.budget = o.budget;
}

std::unique_ptr<BoxArgs> parse_box(const Options& o) {
  auto args = std::make_unique<BoxArgs>();
  sqd_box_init(&args->box);
  if (o.box.empty()) throw UsageError("--box is required");
  for (const auto& d : split(o.box, ',')) args->dims.push_back(to_u64(d, "box dimension"));
  sqd_box& box = args->box;
  box.dims = args->dims.data();
  box.n = args->dims.size();
  if (o.regime == "flat") {
    box.regime = SQD_REGIME_FLAT;
  } else if (o.regime.rfind("lastlarge", 0) == 0) {
    box.regime = SQD_REGIME_LAST_LARGE;
    if (o.regime.size() > 9) {
      if (o.regime[9] != ':') throw UsageError("--regime lastlarge takes the form lastlarge:R");
      box.ratio = to_double(o.regime.substr(10), "ratio");
    }
  } else if (o.regime.rfind("nested", 0) == 0) {
    box.regime = SQD_REGIME_NESTED;
    const std::string spec = o.regime.size() > 7 && o.regime[6] == ':' ? o.regime.substr(7) : "";
    if (spec == "all") {
      box.all_orders = 1;
    } else if (!spec.empty()) {
      for (const auto& i : split(spec, ',')) args->order.push_back(to_u64(i, "permutation index"));
      if (args->order.size() != box.n) throw UsageError("nested order must list every coordinate once");
      box.order = args->order.data();
    } else if (o.regime != "nested") {
      throw UsageError("--regime nested takes the form nested, nested:all or nested:i,j,...");
    }
  } else {
    throw UsageError("--regime must be flat, lastlarge[:R] or nested[:order|:all]");
  }
  if (!o.ratios.empty()) {
    for (const auto& r : split(o.ratios, ',')) args->ratios.push_back(to_double(r, "ratio"));
    if (args->ratios.size() + 1 != box.n) throw UsageError("--ratios needs one entry fewer than --box");
    box.ratios = args->ratios.data();
  }
  box.signed_box = o.signed_box;
  parse_mode(o, box);
  return args;
}

sqd_predicate parse_predicate(const std::string& name) {
  if (name == "squarefree") return SQD_PRED_SQUAREFREE;
  if (name == "coprime") return SQD_PRED_COPRIME;
  if (name == "zero") return SQD_PRED_ZERO;
  throw UsageError("--predicate must be squarefree, coprime or zero");
}

void summarize(const json& j) {
  std::cerr << j.at("command").get<std::string>() << ":";
  if (!j.at("value").is_null()) std::cerr << " value = " << j.at("value").dump();
  if (j.contains("hits")) std::cerr << "  hits = " << j["hits"].dump() << " / " << j["total"].dump();
  if (j.contains("half_width") && j["half_width"].get<double>() > 0) std::cerr << "  +/- " << j["half_width"].dump();
  if (!j.at("cutoff").is_null()) std::cerr << "  cutoff = " << j["cutoff"].dump();
  if (!j.at("tail").is_null()) {
    std::cerr << "  tail [" << j["tail"]["low"].dump() << ", " << j["tail"]["high"].dump() << "] (heuristic)";
  }
  if (j.contains("details")) {
    const auto& d = j["details"];
    if (d.contains("zero_at") && !d["zero_at"].is_null()) std::cerr << "  vanishing factor at " << d["zero_at"].dump();
    if (d.contains("prefactor")) std::cerr << "  prefactor = " << d["prefactor"].get<std::string>();
    if (d.contains("product")) std::cerr << "  product = " << d["product"].dump();
    if (d.contains("counts")) std::cerr << " " << d["counts"].size() << " primes tabulated";
  }
  std::cerr << "  (" << j.at("elapsed_ms").dump() << " ms)\n";
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
}

int emit(const Options& o, sqd_result* raw) {
  ResultPtr r(raw);
  const json j = json::parse(sqd_result_json(r.get()));
  const std::string text = j.dump(2);
  std::cout << text << '\n';
  if (!o.json_path.empty()) write_file(o.json_path, text + "\n");
  if (!o.csv_path.empty()) write_file(o.csv_path, sqd_result_csv(r.get()));
  if (!o.quiet) summarize(j);
  return kOk;
}

int emit_dry_run(const Options& o, const std::string& command, json inputs) {
  json j{{"schema", "sqdense/1"}, {"version", sqd_version()}, {"command", command}, {"dry_run", true},
         {"inputs", std::move(inputs)}};
  std::cout << j.dump(2) << '\n';
  if (!o.quiet) std::cerr << command << ": inputs valid\n";
  return kOk;
}

int run(const std::string& command, const Options& o) {
  sqd_result* r = nullptr;
  if (command == "sf-z" || command == "sf-a") {
    if (command == "sf-a" && o.ring == 0) throw UsageError("sf-a needs --ring q");
    const auto f = parse(o.poly, command == "sf-z" ? 0 : o.ring, o.vars, "--poly");
    if (o.dry_run) return emit_dry_run(o, command, {{"poly", render(f.get())}});
    const auto opts = product_options(o);
    check(sqd_squarefree_product(f.get(), &opts, &r));
  } else if (command == "coprime") {
    const auto f = parse(o.poly, o.ring, o.vars, "--poly");
    const auto g = parse(o.poly2, o.ring, o.vars, "--poly2");
    if (o.dry_run) return emit_dry_run(o, command, {{"poly", render(f.get())}, {"poly2", render(g.get())}});
    const auto opts = product_options(o);
    check(sqd_coprime_product(f.get(), g.get(), &opts, &r));
  } else if (command == "empirical") {
    const sqd_predicate pred = parse_predicate(o.predicate);
    const auto f = parse(o.poly, o.ring, o.vars, "--poly");
    PolyPtr g;
    if (pred == SQD_PRED_COPRIME) g = parse(o.poly2, o.ring, o.vars, "--poly2");
    const auto box = parse_box(o);
    if (o.dry_run) return emit_dry_run(o, command, {{"poly", render(f.get())}, {"box", box->dims}});
    check(sqd_empirical(pred, f.get(), g.get(), &box->box, &r));
  } else if (command == "local") {
    const auto f = parse(o.poly, o.ring, o.vars, "--poly");
    PolyPtr g;
    if (!o.poly2.empty()) g = parse(o.poly2, o.ring, o.vars, "--poly2");
    int method = 0;
    if (o.method == "brute") {
      method = 1;
    } else if (o.method != "hensel") {
      throw UsageError("--method must be hensel or brute");
    }
    if (o.dry_run) return emit_dry_run(o, command, {{"poly", render(f.get())}});
    const auto opts = product_options(o);
    check(sqd_local_counts(f.get(), g.get(), g ? 1 : o.power, g ? 1 : method, &opts, &r));
  } else if (command == "image" || command == "cf" || command == "collide") {
    const auto f = parse(o.poly, 0, o.vars, "--poly");
    if (command != "cf" && o.bound == 0) throw UsageError("--bound is required");
    if (command == "collide" && o.q.empty()) throw UsageError("--q is required");
    if (o.dry_run) return emit_dry_run(o, command, {{"poly", render(f.get())}});
    if (command == "image") check(sqd_image_count(f.get(), o.bound, o.step, &r));
    if (command == "cf") check(sqd_cf_constant(f.get(), &r));
    if (command == "collide") check(sqd_collision_count(f.get(), o.q.c_str(), o.bound, &r));
  } else if (command == "delta") {
    if (o.a == 0) throw UsageError("--a must be positive");
    if (o.dry_run) return emit_dry_run(o, command, {{"a", o.a}, {"b", o.b}});
    check(sqd_delta_table(o.a, o.b.c_str(), &r));
  } else if (command == "ec-gamma") {
    if (o.dry_run) return emit_dry_run(o, command, {{"q", o.field}, {"deg_cutoff", o.deg_cutoff}});
    check(sqd_ec_gamma(o.field, o.deg_cutoff, &r));
  } else if (command == "ec-empirical") {
    sqd_box sampling;
    sqd_box_init(&sampling);
    parse_mode(o, sampling);
    if (o.dry_run) return emit_dry_run(o, command, {{"q", o.field}, {"degree", o.degree}});
    check(sqd_ec_empirical(o.field, o.degree, &sampling, o.deg_cutoff, &r));
  } else {
    throw UsageError("unknown command " + command);
  }
  return emit(o, r);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Densities of squarefree and coprime polynomial values, as Euler products and box counts."};
  app.set_version_flag("--version", sqd_version());
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--json", o.json_path, "Also write the JSON report to this file");
    sub->add_flag("--quiet", o.quiet, "No summary on standard error");
    sub->add_flag("--dry-run", o.dry_run, "Validate the inputs without computing");
    sub->add_option("--budget", o.budget, "Enumeration budget");
    sub->add_option("--threads", o.threads, "Worker threads")->check(CLI::Range(1u, 1024u));
  };
  auto poly_opts = [&](CLI::App* sub, bool ring, bool second) {
    sub->add_option("--poly", o.poly, "Polynomial, e.g. \"x^2+1\"")->required();
    if (second) sub->add_option("--poly2", o.poly2, "Second polynomial");
    sub->add_option("--vars", o.vars, "Comma-separated variable order");
    if (ring) sub->add_option("--ring", o.ring, "0 for Z, or q for F_q[t]");
  };
  auto check_opts = [&](CLI::App* sub) {
    sub->add_option("--cutoff", o.cutoff, "Prime cutoff over Z");
    sub->add_option("--deg-cutoff", o.deg_cutoff, "Degree cutoff over F_q[t]");
    sub->add_option("--seed", o.seed, "Seed for the heuristic check");
    sub->add_option("--trials", o.trials, "Heuristic check trials");
    sub->add_flag("--override", o.override_check, "Skip the squarefree / coprime check");
  };
  auto sampling_opts = [&](CLI::App* sub) {
    sub->add_option("--mode", o.mode, "exhaustive or mc:N");
    sub->add_option("--seed", o.seed, "Monte Carlo seed");
  };

  auto* sfz = app.add_subcommand("sf-z", "Euler product for squarefree values over Z");
  poly_opts(sfz, false, false);
  check_opts(sfz);
  auto* sfa = app.add_subcommand("sf-a", "Euler product for squarefree values over F_q[t]");
  poly_opts(sfa, true, false);
  check_opts(sfa);
  auto* cop = app.add_subcommand("coprime", "Euler product for coprime value pairs");
  poly_opts(cop, true, true);
  cop->get_option("--poly2")->required();
  check_opts(cop);
  auto* emp = app.add_subcommand("empirical", "Frequency over a box");
  poly_opts(emp, true, true);
  emp->add_option("--predicate", o.predicate, "squarefree, coprime or zero");
  emp->add_option("--box", o.box, "Box dimensions B1,B2,... (degree bounds over F_q[t])")->required();
  emp->add_option("--regime", o.regime, "flat, lastlarge[:R], nested[:i,j,...] or nested:all");
  emp->add_option("--ratios", o.ratios, "Nested regime ratios, one per step");
  emp->add_flag("--signed", o.signed_box, "Use [-B, B] without 0 over Z");
  sampling_opts(emp);
  auto* loc = app.add_subcommand("local", "Table of local zero counts");
  poly_opts(loc, true, true);
  loc->add_option("--cutoff", o.cutoff, "Prime cutoff over Z");
  loc->add_option("--deg-cutoff", o.deg_cutoff, "Degree cutoff over F_q[t]");
  loc->add_option("--method", o.method, "hensel or brute");
  loc->add_option("--power", o.power, "1 or 2 (brute only)");
  auto* img = app.add_subcommand("image", "Distinct square classes of f(1..B)");
  poly_opts(img, false, false);
  img->add_option("--bound", o.bound, "B")->required();
  img->add_option("--step", o.step, "Prefix step for the ratio curve");
  img->add_option("--csv", o.csv_path, "Write the ratio curve as CSV");
  auto* cf = app.add_subcommand("cf", "Limit constant of the square-class count");
  poly_opts(cf, false, false);
  auto* del = app.add_subcommand("delta", "Residue table for a*x + b");
  del->add_option("--a", o.a, "a")->required();
  del->add_option("--b", o.b, "b");
  auto* col = app.add_subcommand("collide", "Pairs (m, n) <= B with f(m) = q f(n)");
  poly_opts(col, false, false);
  col->add_option("--q", o.q, "Rational ratio, e.g. 2 or 3/5")->required();
  col->add_option("--bound", o.bound, "B")->required();
  auto* ecg = app.add_subcommand("ec-gamma", "Constant for squarefree elliptic discriminants");
  ecg->add_option("--q", o.field, "Field order")->required();
  ecg->add_option("--deg-cutoff", o.deg_cutoff, "Degree cutoff of the product");
  auto* ece = app.add_subcommand("ec-empirical", "Frequency of squarefree discriminants");
  ece->add_option("--q", o.field, "Field order")->required();
  ece->add_option("--degree", o.degree, "Degree bound on A and B");
  ece->add_option("--deg-cutoff", o.deg_cutoff, "Degree cutoff of the comparison product (0 skips it)");
  sampling_opts(ece);
  for (auto* sub : {sfz, sfa, cop, emp, loc, img, cf, del, col, ecg, ece}) common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    return run(app.get_subcommands().front()->get_name(), o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ApiError& e) {
    std::cerr << "error (" << sqd_status_name(e.status) << "): " << e.what() << '\n';
    return exit_code(e.status);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInternal;
  }
}
