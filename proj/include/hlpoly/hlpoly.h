/*
 * C interface to hlpoly: multipolynomials on l_p^n, random-sign and diagonal
 * witnesses, folding maps, sup-norm estimation, critical exponents and
 * scaling sweeps.
 *
 * Conventions:
 *  - Every fallible call returns an hlpoly_status; HLPOLY_OK is zero. On
 *    failure hlpoly_last_error() returns a message for the calling thread,
 *    valid until that thread's next failing call.
 *  - Polynomials are opaque, immutable handles released by hlpoly_poly_free.
 *  - Strings returned through char** are heap allocated and released with
 *    hlpoly_string_free.
 *  - p = infinity is passed as the IEEE value INFINITY.
 *  - Points are flattened: block 1 coordinates, then block 2, and so on.
 */
#ifndef HLPOLY_H
#define HLPOLY_H

#include <stddef.h>
#include <stdint.h>

#if defined(HLPOLY_BUILDING_LIBRARY)
#define HLPOLY_API __attribute__((visibility("default")))
#else
#define HLPOLY_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hlpoly_status {
  HLPOLY_OK = 0,
  HLPOLY_ERR_INVALID_ARGUMENT = 1,
  HLPOLY_ERR_DIMENSION = 2,
  HLPOLY_ERR_BUDGET = 3,
  HLPOLY_ERR_PRECONDITION = 4,
  HLPOLY_ERR_INVALID_POLYNOMIAL = 5,
  HLPOLY_ERR_PARSE = 6,
  HLPOLY_ERR_IO = 7,
  HLPOLY_ERR_INTERNAL = 99
} hlpoly_status;

typedef struct hlpoly_poly hlpoly_poly;

HLPOLY_API const char* hlpoly_version(void);
HLPOLY_API const char* hlpoly_status_name(hlpoly_status status);
HLPOLY_API const char* hlpoly_last_error(void);
HLPOLY_API void hlpoly_string_free(char* s);

/* ---- polynomials ------------------------------------------------------ */

HLPOLY_API hlpoly_status hlpoly_poly_from_json(const char* json, hlpoly_poly** out);
HLPOLY_API hlpoly_status hlpoly_poly_load(const char* path, hlpoly_poly** out);
HLPOLY_API hlpoly_status hlpoly_poly_to_json(const hlpoly_poly* poly, char** out);
/* Writes the polynomial file. When run_config_json is non-null it is embedded
 * under the top-level key "run_config". */
HLPOLY_API hlpoly_status hlpoly_poly_save(const hlpoly_poly* poly, const char* path,
                                          const char* run_config_json);
HLPOLY_API void hlpoly_poly_free(hlpoly_poly* poly);

HLPOLY_API hlpoly_status hlpoly_poly_shape(const hlpoly_poly* poly, size_t* blocks,
                                           size_t* terms, size_t* total_dim);
/* Copies min(cap, blocks) block dims. */
HLPOLY_API hlpoly_status hlpoly_poly_dims(const hlpoly_poly* poly, uint32_t* dims,
                                          size_t cap);
/* *ok is 1 when every invariant holds; *report (optional) lists violations. */
HLPOLY_API hlpoly_status hlpoly_poly_validate(const hlpoly_poly* poly, int* ok,
                                              char** report);
HLPOLY_API hlpoly_status hlpoly_poly_evaluate(const hlpoly_poly* poly, const double* x,
                                              size_t len, double* out);
HLPOLY_API hlpoly_status hlpoly_poly_gradient(const hlpoly_poly* poly, const double* x,
                                              size_t len, double* grad);
HLPOLY_API hlpoly_status hlpoly_poly_coeff_ls(const hlpoly_poly* poly, double s,
                                              double* out);

/* ---- constructions ---------------------------------------------------- */

/* Diagonal form sum_i x_i^(1)...x_i^(M), folded into the given block degrees
 * (M = sum of degrees). Degrees (1,...,1) give the M-linear form itself. */
HLPOLY_API hlpoly_status hlpoly_make_diagonal(uint64_t n, const uint32_t* degrees,
                                              size_t blocks, hlpoly_poly** out);
/* Random-sign witness with n^M terms, folded into the given block degrees. */
HLPOLY_API hlpoly_status hlpoly_make_ksz(uint64_t n, const uint32_t* degrees,
                                         size_t blocks, uint64_t seed,
                                         hlpoly_poly** out);

typedef enum hlpoly_fold_kind {
  /* M-linear form (degrees 1,...,1, equal dims) -> one-block degree-M poly */
  HLPOLY_FOLD_MULTILINEAR_TO_POLY = 0,
  /* M-linear form -> multipolynomial with the given degrees */
  HLPOLY_FOLD_MULTILINEAR_TO_MULTIPOLY = 1,
  /* multipolynomial -> one-block homogeneous polynomial */
  HLPOLY_FOLD_MULTIPOLY_TO_POLY = 2
} hlpoly_fold_kind;

/* degrees is only read for HLPOLY_FOLD_MULTILINEAR_TO_MULTIPOLY. */
HLPOLY_API hlpoly_status hlpoly_fold(const hlpoly_poly* src, hlpoly_fold_kind kind,
                                     const uint32_t* degrees, size_t blocks,
                                     hlpoly_poly** out);

/* ---- norms ------------------------------------------------------------ */

typedef struct hlpoly_optimizer_config {
  uint64_t starts;
  uint64_t max_iters;
  double step_init;
  double rel_tol;
  uint64_t seed;
  uint64_t workers; /* 0: HLPOLY_WORKERS or hardware concurrency */
} hlpoly_optimizer_config;

HLPOLY_API void hlpoly_optimizer_config_default(hlpoly_optimizer_config* cfg);

typedef enum hlpoly_norm_method {
  HLPOLY_NORM_GRADIENT_ASCENT = 0,
  HLPOLY_NORM_ALTERNATING_DUAL = 1,
  HLPOLY_NORM_VERTEX_EXACT = 2
} hlpoly_norm_method;

typedef struct hlpoly_norm_result {
  double value;
  hlpoly_norm_method method;
  uint64_t starts;
  uint64_t converged_starts;
} hlpoly_norm_result;

/* json_out (optional) receives the full estimate including best_point. */
HLPOLY_API hlpoly_status hlpoly_norm_estimate(const hlpoly_poly* poly, double p,
                                              const hlpoly_optimizer_config* cfg,
                                              hlpoly_norm_result* out, char** json_out);
/* budget 0 selects the default of 2^24 sign patterns. */
HLPOLY_API hlpoly_status hlpoly_norm_exact_vertex(const hlpoly_poly* poly,
                                                  uint64_t budget,
                                                  hlpoly_norm_result* out,
                                                  char** json_out);
HLPOLY_API hlpoly_status hlpoly_lp_sphere_project(const double* v, size_t len, double p,
                                                  double* out);
HLPOLY_API hlpoly_status hlpoly_holder_diagonal_bound(uint64_t n, uint32_t m, double p,
                                                      double* out);
HLPOLY_API hlpoly_status hlpoly_interpolated_norm_bound(double norm2, double norm1,
                                                        double q, double* out);
HLPOLY_API hlpoly_status hlpoly_ksz_bound(uint64_t n, uint32_t m, double p, double* out);

/* ---- exponents -------------------------------------------------------- */

typedef enum hlpoly_regime {
  HLPOLY_REGIME_HIGH_P = 0,
  HLPOLY_REGIME_LOW_P = 1,
  HLPOLY_REGIME_INVALID = 2
} hlpoly_regime;

typedef enum hlpoly_witness {
  HLPOLY_WITNESS_DIAGONAL = 0,
  HLPOLY_WITNESS_KSZ = 1
} hlpoly_witness;

HLPOLY_API hlpoly_status hlpoly_classify_regime(uint32_t m, double p, hlpoly_regime* out);
HLPOLY_API hlpoly_status hlpoly_alpha_of_q(double q, double* out);
HLPOLY_API hlpoly_status hlpoly_hl_exponent_high(uint32_t m, double p, double* out);
HLPOLY_API hlpoly_status hlpoly_hl_exponent_low(uint32_t m, double p, double* out);
HLPOLY_API hlpoly_status hlpoly_ksz_exponent(uint32_t m, double p, double* out);
HLPOLY_API hlpoly_status hlpoly_theoretical_ratio_slope(uint32_t m, double p, double s,
                                                        hlpoly_witness witness,
                                                        double* out);

/* ---- experiments ------------------------------------------------------ */

/* Resolves seeds and defaults so the returned JSON fully determines a run. */
HLPOLY_API hlpoly_status hlpoly_sweep_resolve(const char* config_json, char** resolved);
/* Runs a sweep and returns the CSV document (config line, header, rows,
 * fit summary line). */
HLPOLY_API hlpoly_status hlpoly_sweep_run(const char* config_json, char** csv_out);

#ifdef __cplusplus
}
#endif

#endif /* HLPOLY_H */
