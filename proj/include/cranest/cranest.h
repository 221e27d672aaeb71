/*
 * C interface to the cranest library.
 *
 * Every fallible call returns a cranest_status; on failure a message is
 * available from cranest_last_error() on the same thread. Objects are opaque
 * handles owned by the caller and released with the matching *_free call.
 * User, RRH, row and column indices are 1-based. Complex data crosses the
 * boundary as interleaved (re, im) doubles in row-major order.
 */
#ifndef CRANEST_H
#define CRANEST_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  ifdef CRANEST_BUILDING_LIBRARY
#    define CRANEST_API __declspec(dllexport)
#  else
#    define CRANEST_API __declspec(dllimport)
#  endif
#else
#  define CRANEST_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cranest_status {
  CRANEST_OK = 0,
  CRANEST_ERR_DIMENSION = 1,
  CRANEST_ERR_INDEX = 2,
  CRANEST_ERR_DOMAIN = 3,
  CRANEST_ERR_DEGENERATE_SIGNAL = 4,
  CRANEST_ERR_DIVERGENCE = 5,
  CRANEST_ERR_IO = 6,
  CRANEST_ERR_PARSE = 7,
  CRANEST_ERR_NULL_ARGUMENT = 8,
  CRANEST_ERR_INTERNAL = 9
} cranest_status;

typedef enum cranest_preset {
  CRANEST_PRESET_FULL = 0,
  CRANEST_PRESET_ROW_LASSO = 1,
  CRANEST_PRESET_ELEMENT_LASSO = 2
} cranest_preset;

typedef enum cranest_granularity {
  CRANEST_ROW_CHUNK = 0,
  CRANEST_ELEMENT_CHUNK = 1
} cranest_granularity;

typedef struct cranest_matrix cranest_matrix;
typedef struct cranest_instance cranest_instance;
typedef struct cranest_report cranest_report;

typedef struct cranest_layout {
  int64_t users;          /* K */
  int64_t rrhs;           /* G */
  int64_t rrh_antennas;   /* M */
  int64_t user_antennas;  /* N */
  int64_t pilot_length;   /* L */
} cranest_layout;

typedef struct cranest_scenario {
  cranest_layout layout;
  int64_t active_count;
  double snr_db;
  int noiseless;       /* nonzero: B = A X exactly */
  int path_loss;       /* nonzero: apply the distance model below */
  double area;         /* side of the square deployment region */
  double exponent;     /* path-loss exponent */
  uint64_t seed;
} cranest_scenario;

typedef struct cranest_regularization {
  double alpha1;
  double alpha2;
} cranest_regularization;

typedef struct cranest_solver_config {
  cranest_regularization reg;
  double beta;  /* <= 0 selects the default 4 (alpha1 + alpha2) */
  double epsilon;
  int max_count;
  int max_inner_iters;
  double tol_primal;
  double tol_change;
} cranest_solver_config;

typedef struct cranest_iteration {
  int outer_pass;
  int inner_iter;
  double objective;
  double primal_residual_z;
  double primal_residual_q;
  double dx_rel;
} cranest_iteration;

/* Errors and version */
CRANEST_API const char* cranest_last_error(void);
CRANEST_API const char* cranest_status_string(cranest_status status);
CRANEST_API const char* cranest_version(void);

/* Matrices */
CRANEST_API cranest_status cranest_matrix_zeros(int64_t rows, int64_t cols, cranest_matrix** out);
CRANEST_API cranest_status cranest_matrix_from_data(int64_t rows, int64_t cols, const double* interleaved,
                                                    cranest_matrix** out);
CRANEST_API cranest_status cranest_matrix_clone(const cranest_matrix* m, cranest_matrix** out);
CRANEST_API void cranest_matrix_free(cranest_matrix* m);
CRANEST_API int64_t cranest_matrix_rows(const cranest_matrix* m);
CRANEST_API int64_t cranest_matrix_cols(const cranest_matrix* m);
CRANEST_API cranest_status cranest_matrix_get(const cranest_matrix* m, int64_t row, int64_t col, double* re,
                                              double* im);
CRANEST_API cranest_status cranest_matrix_set(cranest_matrix* m, int64_t row, int64_t col, double re, double im);
/* Copies 2 * rows * cols doubles into `out`; `capacity` counts doubles. */
CRANEST_API cranest_status cranest_matrix_copy_data(const cranest_matrix* m, double* out, size_t capacity);
CRANEST_API cranest_status cranest_matrix_load(const char* path, cranest_matrix** out);
CRANEST_API cranest_status cranest_matrix_save(const char* path, const cranest_matrix* m);
CRANEST_API cranest_status cranest_frobenius_norm(const cranest_matrix* m, double* out);
CRANEST_API cranest_status cranest_hadamard(const cranest_matrix* a, const cranest_matrix* b, cranest_matrix** out);

/* Chunk view of X. rrh = 0 selects the whole row chunk of `user`.
 * `weights` may be NULL (all ones); otherwise it must be real and positive. */
CRANEST_API cranest_status cranest_chunk_extract(const cranest_matrix* x, const cranest_layout* layout,
                                                 int64_t user, int64_t rrh, cranest_matrix** out);
CRANEST_API cranest_status cranest_chunk_norm(const cranest_matrix* x, const cranest_matrix* weights,
                                              const cranest_layout* layout, int64_t user, int64_t rrh,
                                              double* out);

/* Shrinkage */
CRANEST_API cranest_status cranest_matrix_shrink(const cranest_matrix* b, double tau, cranest_matrix** out);
CRANEST_API cranest_status cranest_chunk_shrink(const cranest_matrix* x, const cranest_layout* layout,
                                                cranest_granularity granularity, double tau,
                                                cranest_matrix** out);

/* Scenarios and instances */
CRANEST_API void cranest_scenario_defaults(cranest_scenario* spec);
CRANEST_API cranest_status cranest_instance_generate(const cranest_scenario* spec, cranest_instance** out);
CRANEST_API cranest_status cranest_instance_from_matrices(const cranest_matrix* a, const cranest_matrix* b,
                                                          const cranest_layout* layout, cranest_instance** out);
CRANEST_API cranest_status cranest_instance_load(const char* dir, cranest_instance** out);
/* Only instances that came from cranest_instance_generate or _load can be saved. */
CRANEST_API cranest_status cranest_instance_save(const char* dir, const cranest_instance* inst);
CRANEST_API void cranest_instance_free(cranest_instance* inst);
CRANEST_API cranest_status cranest_instance_layout(const cranest_instance* inst, cranest_layout* out);
CRANEST_API cranest_status cranest_instance_a(const cranest_instance* inst, cranest_matrix** out);
CRANEST_API cranest_status cranest_instance_b(const cranest_instance* inst, cranest_matrix** out);
/* CRANEST_ERR_DOMAIN when the instance carries no ground truth. */
CRANEST_API cranest_status cranest_instance_truth(const cranest_instance* inst, cranest_matrix** out);
CRANEST_API cranest_status cranest_instance_active_set(const cranest_instance* inst, int64_t* out,
                                                       size_t capacity, size_t* count);
CRANEST_API cranest_status cranest_instance_noise_sigma(const cranest_instance* inst, double* out);

/* Functional */
CRANEST_API cranest_status cranest_tuning_bounds(const cranest_matrix* a, const cranest_matrix* b,
                                                 const cranest_matrix* weights, const cranest_layout* layout,
                                                 double* alpha1_star, double* alpha2_star);
CRANEST_API cranest_status cranest_preset_regularization(cranest_preset kind, double alpha1_star,
                                                         double alpha2_star, double fraction,
                                                         cranest_regularization* out);
CRANEST_API cranest_status cranest_objective(const cranest_matrix* x, const cranest_matrix* a,
                                             const cranest_matrix* b, const cranest_matrix* weights,
                                             const cranest_layout* layout, const cranest_regularization* reg,
                                             double* out);
/* Real weight matrix returned with zero imaginary parts. */
CRANEST_API cranest_status cranest_weight_update(const cranest_matrix* x_prev, double epsilon,
                                                 cranest_matrix** out);

/* ADMM */
CRANEST_API void cranest_solver_config_defaults(cranest_solver_config* config);
CRANEST_API cranest_status cranest_solve(const cranest_matrix* a, const cranest_matrix* b,
                                         const cranest_layout* layout, const cranest_solver_config* config,
                                         cranest_report** out);
CRANEST_API void cranest_report_free(cranest_report* report);
CRANEST_API cranest_status cranest_report_x_hat(const cranest_report* report, cranest_matrix** out);
/* Weights of the last pass (real, returned with zero imaginary parts). */
CRANEST_API cranest_status cranest_report_weights(const cranest_report* report, cranest_matrix** out);
CRANEST_API size_t cranest_report_history_length(const cranest_report* report);
/* `position` is a 0-based offset into the history array. */
CRANEST_API cranest_status cranest_report_history(const cranest_report* report, size_t position,
                                                  cranest_iteration* out);
CRANEST_API int cranest_report_pass_count(const cranest_report* report);
CRANEST_API cranest_status cranest_report_pass(const cranest_report* report, int pass, int* inner_iterations,
                                               int* converged);
CRANEST_API double cranest_report_wall_time(const cranest_report* report);
CRANEST_API size_t cranest_report_warning_count(const cranest_report* report);
/* NULL when out of range. The string lives as long as the report. */
CRANEST_API const char* cranest_report_warning(const cranest_report* report, size_t position);

/* Verification */
CRANEST_API cranest_status cranest_kkt_residual(const cranest_matrix* x, const cranest_matrix* a,
                                                const cranest_matrix* b, const cranest_matrix* weights,
                                                const cranest_layout* layout, const cranest_regularization* reg,
                                                double* stationarity, double* dual_feasibility,
                                                double* residual);
/* max_iters <= 0 and tol_grad <= 0 select the defaults. tol_grad bounds the
 * gradient-mapping norm relative to max(1, ||A^H B||). */
CRANEST_API cranest_status cranest_oracle_solve(const cranest_matrix* a, const cranest_matrix* b,
                                                const cranest_matrix* weights, const cranest_layout* layout,
                                                const cranest_regularization* reg, int max_iters, double tol_grad,
                                                cranest_matrix** x_out, double* objective, int* iterations);

/* Metrics */
CRANEST_API cranest_status cranest_nmse_db(const cranest_matrix* x_hat, const cranest_matrix* truth, double* out);
CRANEST_API cranest_status cranest_detect_active(const cranest_matrix* x_hat, const cranest_layout* layout,
                                                 double rel_threshold, int64_t* out, size_t capacity,
                                                 size_t* count);
CRANEST_API cranest_status cranest_detection_errors(const int64_t* estimated, size_t n_estimated,
                                                    const int64_t* truth, size_t n_truth, int64_t* out);

/* Sweeps. `diverged` receives the number of cells whose solve diverged. */
CRANEST_API cranest_status cranest_sweep_run(const char* config_path, const char* out_dir, int jobs,
                                             int64_t* diverged);

#ifdef __cplusplus
}
#endif

#endif
