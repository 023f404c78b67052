/*
 * mhtc — multi-hop transmission capacity toolkit.
 *
 * C interface to the analytic bounds (per-hop success coefficients, expected
 * relay-set counts, outage lower bounds, capacity upper bounds) and to the
 * Monte Carlo network simulator. All functions return mhtc_status; outputs go
 * through pointers. On failure, mhtc_last_error() describes what went wrong
 * (thread-local). Handles are opaque and freed with their _free function.
 */

#ifndef MHTC_H
#define MHTC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MHTC_API __declspec(dllexport)
#else
#define MHTC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mhtc_status {
    MHTC_OK = 0,
    MHTC_ERR_CONFIG = 1,        /* bad configuration or parse failure */
    MHTC_ERR_DOMAIN = 2,        /* argument outside the mathematical domain */
    MHTC_ERR_UNACHIEVABLE = 3,  /* target not reachable on the valid branch */
    MHTC_ERR_OUT_OF_REGIME = 4, /* model evaluated outside its regime */
    MHTC_ERR_NUMERIC = 5,       /* iteration failed to converge */
    MHTC_ERR_IO = 6             /* file I/O failure */
} mhtc_status;

MHTC_API const char* mhtc_version(void);
MHTC_API const char* mhtc_status_str(mhtc_status status);
/* Message for the most recent failure on this thread; never NULL. */
MHTC_API const char* mhtc_last_error(void);

/* ------------------------------------------------------------------ */
/* Per-hop success model: g0(r, lambda_t) = G exp(-lambda_t K r^2).    */
/* ------------------------------------------------------------------ */

typedef struct mhtc_model mhtc_model;

MHTC_API mhtc_status mhtc_model_rayleigh(double alpha, double beta, mhtc_model** out);
/* high_outage != 0 selects the high-outage prefactor G. */
MHTC_API mhtc_status mhtc_model_nakagami(double alpha, double beta, int m0, int high_outage,
                                         mhtc_model** out);
/* upper != 0 selects the alpha/(alpha-1) upper coefficient. */
MHTC_API mhtc_status mhtc_model_pathloss(double alpha, double beta, int upper, mhtc_model** out);
MHTC_API void mhtc_model_free(mhtc_model* model);

MHTC_API mhtc_status mhtc_model_coeffs(const mhtc_model* model, double* G, double* K);
MHTC_API mhtc_status mhtc_hop_success(const mhtc_model* model, double r, double lambda_t,
                                      double* out);

/* ------------------------------------------------------------------ */
/* Experiment configuration (flat key=value text, dotted sections).   */
/* ------------------------------------------------------------------ */

typedef struct mhtc_config mhtc_config;

MHTC_API mhtc_status mhtc_config_load(const char* path, mhtc_config** out);
MHTC_API mhtc_status mhtc_config_parse(const char* text, mhtc_config** out);
MHTC_API mhtc_status mhtc_config_set(mhtc_config* cfg, const char* key, const char* value);
/* Canonical serialization (sorted keys); caller frees with mhtc_string_free. */
MHTC_API mhtc_status mhtc_config_serialize(const mhtc_config* cfg, char** out);
MHTC_API void mhtc_config_free(mhtc_config* cfg);
MHTC_API void mhtc_string_free(char* s);

/* ------------------------------------------------------------------ */
/* Analytics on the configured network (net.* keys).                  */
/* ------------------------------------------------------------------ */

MHTC_API mhtc_status mhtc_expected_relay_sets(const mhtc_config* cfg, double* out);
MHTC_API mhtc_status mhtc_outage_lower_bound(const mhtc_config* cfg, double* out);

typedef struct mhtc_capacity {
    double value;         /* successful transmissions / unit area / slot */
    int valid;            /* 0 when epsilon sits under the floor */
    double epsilon_floor; /* smallest serviceable epsilon */
    double lambda_raw;    /* corresponding max node density */
    double lambda_active; /* lambda * gamma */
    int subslots;         /* normalization constant k */
} mhtc_capacity;

MHTC_API mhtc_status mhtc_tc_upper_bound(const mhtc_config* cfg, double epsilon,
                                         mhtc_capacity* out);
MHTC_API mhtc_status mhtc_max_density_for_outage(const mhtc_config* cfg, double epsilon,
                                                 double* out);
MHTC_API mhtc_status mhtc_predetermined_tc_bound(const mhtc_config* cfg, double epsilon,
                                                 double* out);

/* ------------------------------------------------------------------ */
/* Experiment drivers (CSV emitters; see README for column contracts).*/
/* ------------------------------------------------------------------ */

/* valid_rows: rows whose capacity bound is in its valid regime. Returns
 * MHTC_ERR_UNACHIEVABLE when every emitted row is invalid. */
MHTC_API mhtc_status mhtc_run_analyze(const mhtc_config* cfg, const char* out_csv,
                                      size_t* valid_rows);
MHTC_API mhtc_status mhtc_run_simulate(const mhtc_config* cfg, const char* out_csv);
/* figure: "fig2" | "fig3" | "fig4"; trials = 0 keeps the desk-scale default. */
MHTC_API mhtc_status mhtc_run_reproduce(const char* figure, uint64_t trials, uint64_t seed,
                                        const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* MHTC_H */
