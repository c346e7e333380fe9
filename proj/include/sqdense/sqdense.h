/*
 * C interface to the sqdense library.
 *
 * Polynomials and results are opaque handles. Every call that can fail
 * returns an sqd_status; on failure sqd_last_error() describes the problem
 * for the calling thread. Results carry a JSON report (schema "sqdense/1")
 * and the headline number of the computation.
 */
#ifndef SQDENSE_H
#define SQDENSE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SQD_API __declspec(dllexport)
#else
#define SQD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sqd_status {
  SQD_OK = 0,
  SQD_ERR_INTERNAL = 1,
  SQD_ERR_PARSE = 2,
  SQD_ERR_PRECONDITION = 3,
  SQD_ERR_BUDGET = 4,
  SQD_ERR_DOMAIN = 5,
  SQD_ERR_ARGUMENT = 6
} sqd_status;

typedef struct sqd_poly sqd_poly;
typedef struct sqd_result sqd_result;

SQD_API const char* sqd_version(void);
/* Message for the last failed call on this thread ("" if none). */
SQD_API const char* sqd_last_error(void);
SQD_API const char* sqd_status_name(sqd_status status);

/* ---- polynomials ------------------------------------------------------- */

/* q = 0 parses over Z, otherwise over F_q[t]. vars is a comma-separated
 * variable list, or NULL to collect the identifiers in natural order. */
SQD_API sqd_status sqd_poly_parse(const char* text, uint32_t q, const char* vars, sqd_poly** out);
SQD_API void sqd_poly_free(sqd_poly* poly);
/* Canonical text; release with sqd_string_free. */
SQD_API sqd_status sqd_poly_render(const sqd_poly* poly, char** out);
SQD_API size_t sqd_poly_arity(const sqd_poly* poly);
/* 0 over Z. */
SQD_API uint32_t sqd_poly_field(const sqd_poly* poly);
SQD_API void sqd_string_free(char* text);

/* Heuristic squarefree test. *passed is 1 or 0; on failure *witness (if
 * not NULL) receives a description to release with sqd_string_free. */
SQD_API sqd_status sqd_check_squarefree(const sqd_poly* f, unsigned trials, uint64_t seed, int* passed,
                                        char** witness);
/* Heuristic common-factor test; *coprime is 1 when no common factor was seen. */
SQD_API sqd_status sqd_check_coprime(const sqd_poly* f, const sqd_poly* g, unsigned trials, uint64_t seed,
                                     int* coprime, char** witness);

/* ---- options ----------------------------------------------------------- */

typedef struct sqd_options {
  uint64_t cutoff;     /* prime bound over Z */
  unsigned deg_cutoff; /* degree bound over F_q[t] */
  uint64_t seed;
  unsigned trials;     /* heuristic check trials */
  int override_check;  /* nonzero skips the squarefree / coprime check */
  uint64_t budget;     /* enumeration budget */
  unsigned threads;
} sqd_options;

SQD_API void sqd_options_init(sqd_options* opts);

typedef enum sqd_regime { SQD_REGIME_FLAT = 0, SQD_REGIME_LAST_LARGE = 1, SQD_REGIME_NESTED = 2 } sqd_regime;
typedef enum sqd_mode { SQD_MODE_EXHAUSTIVE = 0, SQD_MODE_MONTE_CARLO = 1 } sqd_mode;
typedef enum sqd_predicate {
  SQD_PRED_SQUAREFREE = 0,
  SQD_PRED_COPRIME = 1,
  SQD_PRED_ZERO = 2
} sqd_predicate;

typedef struct sqd_box {
  const uint64_t* dims;
  size_t n;
  sqd_regime regime;
  double ratio;          /* last_large, and nested when ratios is NULL */
  const size_t* order;   /* nested: permutation of 0..n-1, or NULL */
  const double* ratios;  /* nested: n-1 ratios, or NULL */
  int all_orders;        /* nested: nonzero runs every permutation and reports the maximum */
  sqd_mode mode;
  uint64_t samples;
  uint64_t seed;
  int signed_box;
  unsigned threads;
  uint64_t budget;
} sqd_box;

SQD_API void sqd_box_init(sqd_box* box);

/* ---- computations ------------------------------------------------------ */

/* Euler products: squarefree values (Z or F_q[t] by the polynomial's ring)
 * and coprime pairs. */
SQD_API sqd_status sqd_squarefree_product(const sqd_poly* f, const sqd_options* opts, sqd_result** out);
SQD_API sqd_status sqd_coprime_product(const sqd_poly* f, const sqd_poly* g, const sqd_options* opts,
                                       sqd_result** out);

/* Empirical density; g is used only by SQD_PRED_COPRIME. */
SQD_API sqd_status sqd_empirical(sqd_predicate pred, const sqd_poly* f, const sqd_poly* g, const sqd_box* box,
                                 sqd_result** out);

/* Table of local counts: zeros mod p^power (power 1 or 2), or common zeros
 * mod p when g is given. method: 0 = Hensel (power 2 only), 1 = brute. */
SQD_API sqd_status sqd_local_counts(const sqd_poly* f, const sqd_poly* g, unsigned power, int method,
                                    const sqd_options* opts, sqd_result** out);

/* Square classes of univariate integer polynomials. prefix_step > 0 adds
 * the running (bound, distinct, ratio) curve. */
SQD_API sqd_status sqd_image_count(const sqd_poly* f, uint64_t bound, uint64_t prefix_step, sqd_result** out);
SQD_API sqd_status sqd_cf_constant(const sqd_poly* f, sqd_result** out);
/* b is a decimal integer. */
SQD_API sqd_status sqd_delta_table(uint64_t a, const char* b, sqd_result** out);
/* q is a decimal rational "a/b". */
SQD_API sqd_status sqd_collision_count(const sqd_poly* f, const char* q, uint64_t bound, sqd_result** out);

/* Elliptic discriminants over F_q[t]. */
SQD_API sqd_status sqd_ec_gamma(uint32_t q, unsigned deg_cutoff, sqd_result** out);
SQD_API sqd_status sqd_ec_empirical(uint32_t q, unsigned degree_bound, const sqd_box* sampling,
                                    unsigned product_cutoff, sqd_result** out);

/* ---- results ----------------------------------------------------------- */

/* JSON report; valid until sqd_result_free. */
SQD_API const char* sqd_result_json(const sqd_result* result);
SQD_API double sqd_result_value(const sqd_result* result);
/* CSV rows for curves (empty when the computation has none). */
SQD_API const char* sqd_result_csv(const sqd_result* result);
SQD_API void sqd_result_free(sqd_result* result);

#ifdef __cplusplus
}
#endif

#endif /* SQDENSE_H */
