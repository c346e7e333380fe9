#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <memory>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "sqdense/sqdense.h"

using nlohmann::json;

namespace {

struct Poly {
  sqd_poly* p = nullptr;
  Poly(const char* text, uint32_t q = 0, const char* vars = nullptr) {
    REQUIRE(sqd_poly_parse(text, q, vars, &p) == SQD_OK);
  }
  ~Poly() { sqd_poly_free(p); }
  Poly(const Poly&) = delete;
  Poly& operator=(const Poly&) = delete;
};

struct Result {
  sqd_result* r = nullptr;
  ~Result() { sqd_result_free(r); }
  json doc() const { return json::parse(sqd_result_json(r)); }
};

sqd_options defaults() {
  sqd_options o;
  sqd_options_init(&o);
  return o;
}

json strip_time(json j) {
  j.erase("elapsed_ms");
  return j;
}

}  // namespace

TEST_CASE("parse, render and inspect") {
  Poly f("x^2+1");
  char* text = nullptr;
  REQUIRE(sqd_poly_render(f.p, &text) == SQD_OK);
  CHECK(std::string(text) == "x^2 + 1");
  sqd_string_free(text);
  CHECK(sqd_poly_arity(f.p) == 1);
  CHECK(sqd_poly_field(f.p) == 0);

  Poly g("A^3 + B", 5, "A,B");
  CHECK(sqd_poly_arity(g.p) == 2);
  CHECK(sqd_poly_field(g.p) == 5);
}

TEST_CASE("errors are reported by status and message") {
  sqd_poly* p = nullptr;
  CHECK(sqd_poly_parse("x^^2", 0, nullptr, &p) == SQD_ERR_PARSE);
  CHECK(p == nullptr);
  CHECK(std::string(sqd_last_error()).size() > 0);
  CHECK(sqd_poly_parse(nullptr, 0, nullptr, &p) == SQD_ERR_ARGUMENT);
  CHECK(sqd_poly_parse("x", 6, nullptr, &p) == SQD_ERR_DOMAIN);
  CHECK(std::string(sqd_status_name(SQD_ERR_BUDGET)) == "budget");

  Poly ok("x");
  Result r;
  const auto opts = defaults();
  REQUIRE(sqd_squarefree_product(ok.p, &opts, &r.r) == SQD_OK);
  CHECK(std::string(sqd_last_error()).empty());
}

TEST_CASE("squarefree product report") {
  Poly f("x^2+1");
  auto opts = defaults();
  Result r;
  REQUIRE(sqd_squarefree_product(f.p, &opts, &r.r) == SQD_OK);
  const json j = r.doc();
  CHECK(j["schema"] == "sqdense/1");
  CHECK(j["command"] == "sf-z");
  CHECK(j["cutoff"] == 10000);
  CHECK(j["value"].get<double>() == doctest::Approx(0.8948).epsilon(1e-4));
  CHECK(sqd_result_value(r.r) == j["value"].get<double>());
  CHECK(j["tail"]["rigorous"] == false);
  CHECK(j["tail"]["high"] == 0.0);
  CHECK(j["tail"]["low"].get<double>() < 0);
  CHECK(!j.contains("factors"));
  CHECK(j["details"]["factor_count"] == 1229);
  CHECK(j.contains("elapsed_ms"));

  opts.cutoff = 1000;
  Result small;
  REQUIRE(sqd_squarefree_product(f.p, &opts, &small.r) == SQD_OK);
  const json k = small.doc();
  REQUIRE(k["factors"].size() == 168);
  CHECK(k["factors"][0] == json::array({"2", 0, 1.0}));
  CHECK(k["factors"][2] == json::array({"5", 2, 1 - 2.0 / 25}));
}

TEST_CASE("non-squarefree input is a precondition error unless overridden") {
  Poly f("x^2");
  auto opts = defaults();
  Result r;
  CHECK(sqd_squarefree_product(f.p, &opts, &r.r) == SQD_ERR_PRECONDITION);
  CHECK(r.r == nullptr);
  int passed = 1;
  char* witness = nullptr;
  REQUIRE(sqd_check_squarefree(f.p, 20, 1, &passed, &witness) == SQD_OK);
  CHECK(passed == 0);
  REQUIRE(witness != nullptr);
  sqd_string_free(witness);

  opts.override_check = 1;
  opts.cutoff = 100;
  REQUIRE(sqd_squarefree_product(f.p, &opts, &r.r) == SQD_OK);
  // c_p = p, so every factor is 1 - 1/p.
  double expected = 1;
  for (int p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97}) {
    expected *= 1 - 1.0 / p;
  }
  CHECK(sqd_result_value(r.r) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("coprime product and check") {
  Poly f("x + y"), g("x - y");
  auto opts = defaults();
  Result r;
  REQUIRE(sqd_coprime_product(f.p, g.p, &opts, &r.r) == SQD_OK);
  CHECK(sqd_result_value(r.r) == doctest::Approx(4 / (M_PI * M_PI)).epsilon(1e-3));
  int coprime = 0;
  REQUIRE(sqd_check_coprime(f.p, g.p, 20, 1, &coprime, nullptr) == SQD_OK);
  CHECK(coprime == 1);

  Poly a("x^2 - y^2"), b("x + y");
  char* witness = nullptr;
  REQUIRE(sqd_check_coprime(a.p, b.p, 20, 1, &coprime, &witness) == SQD_OK);
  CHECK(coprime == 0);
  sqd_string_free(witness);
  Result bad;
  CHECK(sqd_coprime_product(a.p, b.p, &opts, &bad.r) == SQD_ERR_PRECONDITION);
}

TEST_CASE("empirical counts") {
  Poly f("x");
  const uint64_t dims[] = {1000};
  sqd_box box;
  sqd_box_init(&box);
  box.dims = dims;
  box.n = 1;
  Result r;
  REQUIRE(sqd_empirical(SQD_PRED_SQUAREFREE, f.p, nullptr, &box, &r.r) == SQD_OK);
  const json j = r.doc();
  CHECK(j["hits"] == 608);
  CHECK(j["total"] == 1000);
  CHECK(j["half_width"] == 0.0);
  CHECK(!j.contains("seed"));

  Poly x("x", 0, "x,y"), y("y", 0, "x,y");
  const uint64_t dims2[] = {100, 100};
  box.dims = dims2;
  box.n = 2;
  Result c;
  REQUIRE(sqd_empirical(SQD_PRED_COPRIME, x.p, y.p, &box, &c.r) == SQD_OK);
  CHECK(c.doc()["hits"] == 6087);
  Result missing;
  CHECK(sqd_empirical(SQD_PRED_COPRIME, x.p, nullptr, &box, &missing.r) == SQD_ERR_ARGUMENT);
}

TEST_CASE("Monte Carlo reports are reproducible across thread counts") {
  Poly f("x^2 + 1");
  const uint64_t dims[] = {10000};
  sqd_box box;
  sqd_box_init(&box);
  box.dims = dims;
  box.n = 1;
  box.mode = SQD_MODE_MONTE_CARLO;
  box.samples = 20000;
  box.seed = 42;
  Result a, b;
  REQUIRE(sqd_empirical(SQD_PRED_SQUAREFREE, f.p, nullptr, &box, &a.r) == SQD_OK);
  box.threads = 4;
  REQUIRE(sqd_empirical(SQD_PRED_SQUAREFREE, f.p, nullptr, &box, &b.r) == SQD_OK);
  CHECK(strip_time(a.doc()) == strip_time(b.doc()));
  CHECK(a.doc()["seed"] == 42);
  CHECK(a.doc()["half_width"].get<double>() > 0);
}

TEST_CASE("nested regime over all orders") {
  Poly f("x", 0, "x,y");
  const uint64_t dims[] = {10, 10};
  sqd_box box;
  sqd_box_init(&box);
  box.dims = dims;
  box.n = 2;
  box.regime = SQD_REGIME_NESTED;
  box.all_orders = 1;
  Result r;
  REQUIRE(sqd_empirical(SQD_PRED_SQUAREFREE, f.p, nullptr, &box, &r.r) == SQD_OK);
  const json j = r.doc();
  REQUIRE(j["details"]["orders"].size() == 2);
  double best = 0;
  for (const auto& o : j["details"]["orders"]) best = std::max(best, o["ratio"].get<double>());
  CHECK(j["ratio"] == best);
}

TEST_CASE("budget errors") {
  Poly f("x*y");
  const uint64_t dims[] = {100000, 100000};
  sqd_box box;
  sqd_box_init(&box);
  box.dims = dims;
  box.n = 2;
  Result r;
  CHECK(sqd_empirical(SQD_PRED_SQUAREFREE, f.p, nullptr, &box, &r.r) == SQD_ERR_BUDGET);
}

TEST_CASE("local counts table") {
  Poly f("x^2 + 1");
  auto opts = defaults();
  opts.cutoff = 13;
  Result r;
  REQUIRE(sqd_local_counts(f.p, nullptr, 2, 0, &opts, &r.r) == SQD_OK);
  const json counts = r.doc()["details"]["counts"];
  REQUIRE(counts.size() == 6);
  CHECK(counts[0]["prime"] == "2");
  CHECK(counts[0]["count"] == 0);
  CHECK(counts[2]["prime"] == "5");
  CHECK(counts[2]["count"] == 2);
  CHECK(counts[3]["count"] == 0);

  Result brute;
  REQUIRE(sqd_local_counts(f.p, nullptr, 1, 1, &opts, &brute.r) == SQD_OK);
  CHECK(brute.doc()["details"]["counts"][0]["count"] == 1);
  Result bad;
  CHECK(sqd_local_counts(f.p, nullptr, 1, 0, &opts, &bad.r) == SQD_ERR_DOMAIN);

  Poly a("x", 0, "x,y"), b("y", 0, "x,y");
  Result common;
  REQUIRE(sqd_local_counts(a.p, b.p, 1, 1, &opts, &common.r) == SQD_OK);
  for (const auto& c : common.doc()["details"]["counts"]) CHECK(c["count"] == 1);
}

TEST_CASE("square classes") {
  Poly f("4*x + 1");
  Result img;
  REQUIRE(sqd_image_count(f.p, 1000, 250, &img.r) == SQD_OK);
  const std::string csv = sqd_result_csv(img.r);
  CHECK(csv.rfind("bound,distinct,ratio\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);

  Result cf;
  REQUIRE(sqd_cf_constant(f.p, &cf.r) == SQD_OK);
  CHECK(cf.doc()["details"]["over_pi_squared"] == "8");
  CHECK(sqd_result_value(cf.r) == doctest::Approx(8 / (M_PI * M_PI)));

  Result delta;
  REQUIRE(sqd_delta_table(4, "1", &delta.r) == SQD_OK);
  CHECK(delta.doc()["details"]["sum"] == "1");
  Result bad_b;
  CHECK(sqd_delta_table(4, "one", &bad_b.r) == SQD_ERR_PARSE);

  Poly pell("x^2 + 1");
  Result col;
  REQUIRE(sqd_collision_count(pell.p, "2", 100, &col.r) == SQD_OK);
  CHECK(sqd_result_value(col.r) == 3);
  Result half;
  REQUIRE(sqd_collision_count(pell.p, "1/2", 100, &half.r) == SQD_OK);
  CHECK(sqd_result_value(half.r) == 3);
  Result one;
  CHECK(sqd_collision_count(pell.p, "1", 100, &one.r) == SQD_ERR_DOMAIN);

  Poly multi("x*y");
  Result uni;
  CHECK(sqd_image_count(multi.p, 10, 0, &uni.r) == SQD_ERR_DOMAIN);
}

TEST_CASE("elliptic discriminants") {
  Result g;
  REQUIRE(sqd_ec_gamma(5, 3, &g.r) == SQD_OK);
  const json j = g.doc();
  CHECK(j["details"]["prefactor"] == "125/96");
  CHECK(j["details"]["rd_limit"]["prefactor"] == "5/4");
  CHECK(j["value"].get<double>() == doctest::Approx(j["details"]["product"].get<double>() * 125 / 96));
  CHECK(j["factors"][0][0] == "inf");
  CHECK(j["factors"][0][1] == 45);

  Result bad;
  CHECK(sqd_ec_gamma(9, 3, &bad.r) == SQD_ERR_DOMAIN);

  Result e;
  REQUIRE(sqd_ec_empirical(5, 1, nullptr, 1, &e.r) == SQD_OK);
  const json k = e.doc();
  CHECK(k["total"] == 625);
  CHECK(k["details"]["discriminant"] == "A^3 + 3*B^2");
  CHECK(k["details"].contains("product"));
}
