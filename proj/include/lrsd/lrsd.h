/*
 * C interface to the lrsd low-rank + sparse decomposition library.
 *
 * Objects are opaque handles created by lrsd_* functions and released with
 * the matching *_destroy function. Every fallible call returns an
 * lrsd_status; on failure lrsd_last_error() describes the problem (the text
 * is per thread and valid until the next failing call on that thread).
 * Matrices cross the boundary in row-major order.
 */
#ifndef LRSD_H
#define LRSD_H

#include <stddef.h>
#include <stdint.h>

#if defined(LRSD_BUILDING_LIBRARY)
#define LRSD_API __attribute__((visibility("default")))
#else
#define LRSD_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lrsd_status {
    LRSD_OK = 0,
    LRSD_ERR_INVALID_ARGUMENT = 1,
    LRSD_ERR_DOMAIN = 2,
    LRSD_ERR_SHAPE = 3,
    LRSD_ERR_PARSE = 4,
    LRSD_ERR_IO = 5,
    LRSD_ERR_DEGENERATE = 6,
    LRSD_ERR_INTERNAL = 7
} lrsd_status;

typedef struct lrsd_matrix lrsd_matrix;
typedef struct lrsd_result lrsd_result;
typedef struct lrsd_instance lrsd_instance;
typedef struct lrsd_benchmark lrsd_benchmark;
typedef struct lrsd_panel lrsd_panel;
typedef struct lrsd_embedding lrsd_embedding;
typedef struct lrsd_snp_report lrsd_snp_report;

LRSD_API const char* lrsd_version(void);
LRSD_API const char* lrsd_last_error(void);
LRSD_API const char* lrsd_status_string(lrsd_status status);

/* ---- matrices ---------------------------------------------------------- */

LRSD_API lrsd_status lrsd_matrix_from_values(size_t rows, size_t cols, const double* row_major, lrsd_matrix** out);
/* Header row and row-label column are detected from the content. */
LRSD_API lrsd_status lrsd_matrix_read_tsv(const char* path, lrsd_matrix** out);
LRSD_API lrsd_status lrsd_matrix_write_tsv(const lrsd_matrix* m, const char* path);
LRSD_API size_t lrsd_matrix_rows(const lrsd_matrix* m);
LRSD_API size_t lrsd_matrix_cols(const lrsd_matrix* m);
LRSD_API lrsd_status lrsd_matrix_values(const lrsd_matrix* m, double* row_major, size_t capacity);
LRSD_API void lrsd_matrix_destroy(lrsd_matrix* m);

LRSD_API lrsd_status lrsd_matrix_median(const lrsd_matrix* m, double* out);
/* 1.48 * median |m - median(m)| */
LRSD_API lrsd_status lrsd_estimate_sigma(const lrsd_matrix* m, double* out);

LRSD_API lrsd_status lrsd_inverse_normal_cdf(double q, double* out);
LRSD_API lrsd_status lrsd_p_to_z(double p, int one_sided, double* out);

/* ---- decomposition ----------------------------------------------------- */

typedef struct lrsd_solver_options {
    double alpha;           /* <= 0: (sqrt(n) + sqrt(p)) * sigma_hat */
    double beta;            /* <= 0: beta_scale * alpha / sqrt(max(n, p)) */
    double threshold;       /* < 0: threshold_scale * sigma_hat */
    double beta_scale;      /* default 2 */
    double threshold_scale; /* default 0.25 */
    int max_iterations;     /* default 500 */
    double rel_tolerance;   /* default 1e-10 */
} lrsd_solver_options;

LRSD_API void lrsd_solver_options_init(lrsd_solver_options* options);

typedef struct lrsd_params {
    double sigma_hat;
    double alpha;
    double beta;
    double threshold;
    int alpha_auto;
    int beta_auto;
    int threshold_auto;
} lrsd_params;

typedef enum lrsd_param_id { LRSD_PARAM_ALPHA = 0, LRSD_PARAM_BETA = 1, LRSD_PARAM_THRESHOLD = 2 } lrsd_param_id;

LRSD_API lrsd_status lrsd_resolve_params(const lrsd_matrix* d, const lrsd_solver_options* options, lrsd_params* out);

LRSD_API lrsd_status lrsd_decompose(const lrsd_matrix* d, const lrsd_solver_options* options, lrsd_result** out);
LRSD_API void lrsd_result_destroy(lrsd_result* r);
LRSD_API lrsd_status lrsd_result_params(const lrsd_result* r, lrsd_params* out);
/* Rule that produced a resolved parameter, e.g. "(sqrt(n)+sqrt(p))*sigma_hat" or "user". */
LRSD_API const char* lrsd_result_param_rule(const lrsd_result* r, lrsd_param_id which);
LRSD_API int lrsd_result_converged(const lrsd_result* r);
LRSD_API int lrsd_result_iterations(const lrsd_result* r);
LRSD_API size_t lrsd_result_rank(const lrsd_result* r);
LRSD_API size_t lrsd_result_nnz(const lrsd_result* r);
LRSD_API size_t lrsd_result_trace_length(const lrsd_result* r);
LRSD_API lrsd_status lrsd_result_trace(const lrsd_result* r, double* out, size_t capacity);
LRSD_API lrsd_status lrsd_result_low_rank(const lrsd_result* r, lrsd_matrix** out);
LRSD_API lrsd_status lrsd_result_sparse(const lrsd_result* r, lrsd_matrix** out);
/* Writes X.tsv, E.tsv and trace.tsv into dir (created if needed). */
LRSD_API lrsd_status lrsd_result_write(const lrsd_result* r, const char* dir);
/* threshold < 0 uses the resolved threshold. Mask entries are 0/1. */
LRSD_API lrsd_status lrsd_result_detect(const lrsd_result* r, double threshold, lrsd_matrix** mask);

LRSD_API lrsd_status lrsd_detect(const lrsd_matrix* x, const lrsd_matrix* e, double threshold, lrsd_matrix** mask);
LRSD_API lrsd_status lrsd_objective(const lrsd_matrix* d, const lrsd_matrix* x, const lrsd_matrix* e, double alpha,
                                    double beta, double* out);
LRSD_API lrsd_status lrsd_optimality_residual(const lrsd_matrix* d, const lrsd_matrix* x, const lrsd_matrix* e,
                                              double alpha, double beta, double* out);

/* ---- simulation -------------------------------------------------------- */

typedef struct lrsd_pattern_spec {
    int pattern;         /* 1..4 */
    double scale;        /* default 50 */
    double sparse_prob;  /* default 0.01 */
    double sparse_value; /* default 6 */
    double noise_sigma;  /* default 1 */
    double divisor;      /* default 1 */
    uint64_t seed;
} lrsd_pattern_spec;

LRSD_API void lrsd_pattern_spec_init(lrsd_pattern_spec* spec, int pattern);
LRSD_API lrsd_status lrsd_simulate(const lrsd_pattern_spec* spec, lrsd_instance** out);
LRSD_API double lrsd_instance_snr(const lrsd_instance* inst);
LRSD_API lrsd_status lrsd_instance_data(const lrsd_instance* inst, lrsd_matrix** out);
LRSD_API lrsd_status lrsd_instance_truth_mask(const lrsd_instance* inst, lrsd_matrix** out);
/* data.tsv, truth.tsv, mask.tsv and meta.txt */
LRSD_API lrsd_status lrsd_instance_write(const lrsd_instance* inst, const char* dir);
LRSD_API void lrsd_instance_destroy(lrsd_instance* inst);

/* ---- evaluation -------------------------------------------------------- */

typedef struct lrsd_detection_report {
    int64_t tp;
    int64_t fp;
    int64_t fn;
    int64_t tn;
    double precision;
    double recall;
    double f1;
    int precision_undefined;
    int recall_undefined;
    int f1_undefined;
} lrsd_detection_report;

/* Nonzero entries of the matrices count as positives. */
LRSD_API lrsd_status lrsd_score(const lrsd_matrix* predicted, const lrsd_matrix* truth, lrsd_detection_report* out);
LRSD_API lrsd_status lrsd_report_write_tsv(const lrsd_detection_report* report, const char* path);

typedef struct lrsd_benchmark_row {
    int pattern;
    double divisor;
    int seeds;
    double snr_mean;
    double precision_mean;
    double precision_std;
    double recall_mean;
    double recall_std;
    double f1_mean;
    double f1_std;
} lrsd_benchmark_row;

/* Each spec is run for seeds spec.seed .. spec.seed + seeds - 1. */
LRSD_API lrsd_status lrsd_benchmark_run(const lrsd_pattern_spec* specs, size_t n_specs, int seeds,
                                        const lrsd_solver_options* options, lrsd_benchmark** out);
LRSD_API size_t lrsd_benchmark_rows(const lrsd_benchmark* b);
LRSD_API lrsd_status lrsd_benchmark_row_get(const lrsd_benchmark* b, size_t index, lrsd_benchmark_row* out);
LRSD_API lrsd_status lrsd_benchmark_write_tsv(const lrsd_benchmark* b, const char* path);
LRSD_API void lrsd_benchmark_destroy(lrsd_benchmark* b);

/* ---- summary statistics ------------------------------------------------ */

typedef struct lrsd_align_options {
    size_t min_coverage;
    int one_sided;              /* 0: z = Phi^-1(1 - p/2), 1: z = Phi^-1(1 - p) */
    int study_median_imputation; /* 0: missing entries get z = 0 */
} lrsd_align_options;

LRSD_API void lrsd_align_options_init(lrsd_align_options* options);
LRSD_API lrsd_status lrsd_panel_from_manifest(const char* manifest, const lrsd_align_options* options,
                                              lrsd_panel** out);
LRSD_API size_t lrsd_panel_snps(const lrsd_panel* panel);
LRSD_API size_t lrsd_panel_studies(const lrsd_panel* panel);
LRSD_API const char* lrsd_panel_study_name(const lrsd_panel* panel, size_t index); /* "" when out of range */
LRSD_API size_t lrsd_panel_imputed(const lrsd_panel* panel);
LRSD_API size_t lrsd_panel_clamped(const lrsd_panel* panel);
LRSD_API lrsd_status lrsd_panel_z_matrix(const lrsd_panel* panel, lrsd_matrix** out);
LRSD_API lrsd_status lrsd_panel_write(const lrsd_panel* panel, const char* z_path, const char* imputed_path);
LRSD_API void lrsd_panel_destroy(lrsd_panel* panel);

/* ---- analysis ---------------------------------------------------------- */

LRSD_API lrsd_status lrsd_embed_studies(const lrsd_matrix* x_hat, size_t rank, lrsd_embedding** out);
LRSD_API size_t lrsd_embedding_studies(const lrsd_embedding* emb);
LRSD_API size_t lrsd_embedding_dimension(const lrsd_embedding* emb);
LRSD_API lrsd_status lrsd_embedding_coordinates(const lrsd_embedding* emb, double* row_major, size_t capacity);
/* group_radius < 0 omits the single-linkage group column. */
LRSD_API lrsd_status lrsd_embedding_write(const lrsd_embedding* emb, const char* path, double group_radius);
LRSD_API void lrsd_embedding_destroy(lrsd_embedding* emb);

/* threshold < 0 uses the result's resolved threshold. */
LRSD_API lrsd_status lrsd_extract_snps(const lrsd_result* r, double threshold, lrsd_snp_report** out);
LRSD_API size_t lrsd_snp_report_shared_count(const lrsd_snp_report* rep);
LRSD_API size_t lrsd_snp_report_specific_count(const lrsd_snp_report* rep);
LRSD_API lrsd_status lrsd_snp_report_write(const lrsd_snp_report* rep, const char* shared_path,
                                           const char* specific_path);
LRSD_API void lrsd_snp_report_destroy(lrsd_snp_report* rep);

#ifdef __cplusplus
}
#endif

#endif /* LRSD_H */
