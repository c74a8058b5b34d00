#ifndef SPRE_SPRE_H
#define SPRE_SPRE_H

/*
 * C interface to the spre extrapolation library.
 *
 * Every fallible call returns a spre_status. On failure a human-readable
 * message is available from spre_last_error() on the calling thread until the
 * next call into the library. Handles are opaque and owned by the caller, who
 * releases them with the matching *_free function. Strings returned through
 * char** out-parameters are heap-allocated and released with spre_string_free.
 *
 * Arrays of points are row-major: point i, coordinate j lives at [i*dim + j].
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SPRE_BUILDING_LIBRARY)
#    define SPRE_API __declspec(dllexport)
#  else
#    define SPRE_API __declspec(dllimport)
#  endif
#else
#  define SPRE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum spre_status {
  SPRE_OK = 0,
  SPRE_INVALID_ARGUMENT = 1,
  SPRE_DIMENSION_MISMATCH = 2,
  SPRE_NOT_UNISOLVENT = 3,
  SPRE_GRAM_NOT_PD = 4,
  SPRE_NUMERICAL_BREAKDOWN = 5,
  SPRE_DEGENERATE_SCALING = 6,
  SPRE_FOLD_NOT_UNISOLVENT = 7,
  SPRE_EMPTY_PROPOSAL = 8,
  SPRE_NON_RECIPROCAL_WIDTH = 9,
  SPRE_COINCIDENT_AGENTS = 10,
  SPRE_CONFIG = 11,
  SPRE_IO = 12,
  SPRE_INTERNAL = 99
} spre_status;

typedef enum spre_kernel_family {
  SPRE_KERNEL_WHITE_NOISE = 0,
  SPRE_KERNEL_MATERN12 = 1,
  SPRE_KERNEL_MATERN32 = 2,
  SPRE_KERNEL_GAUSSIAN = 3
} spre_kernel_family;

typedef enum spre_repulsion {
  SPRE_REPULSION_PRINTED = 0,
  SPRE_REPULSION_REPULSIVE = 1
} spre_repulsion;

typedef struct spre_index_set spre_index_set;
typedef struct spre_dataset spre_dataset;
typedef struct spre_model spre_model;

/* ---- diagnostics ------------------------------------------------------ */

SPRE_API const char* spre_version(void);
SPRE_API const char* spre_status_name(spre_status status);
/* Message for the last failure on this thread; "" if none. */
SPRE_API const char* spre_last_error(void);
SPRE_API void spre_string_free(char* s);

/* ---- index sets -------------------------------------------------------- */

/* `exponents` holds count*dim integers; the zero index must be present. */
SPRE_API spre_status spre_index_set_create(size_t dim, size_t count, const int* exponents,
                                           spre_index_set** out);
SPRE_API spre_status spre_index_set_total_degree(size_t dim, int degree, spre_index_set** out);
/* Parses [[a_1, ..., a_d], ...]. */
SPRE_API spre_status spre_index_set_from_json(size_t dim, const char* json, spre_index_set** out);
SPRE_API void spre_index_set_free(spre_index_set* set);
SPRE_API size_t spre_index_set_size(const spre_index_set* set);
SPRE_API size_t spre_index_set_dim(const spre_index_set* set);
/* Writes size*dim exponents in canonical order. */
SPRE_API spre_status spre_index_set_exponents(const spre_index_set* set, int* out);

/* ---- datasets ---------------------------------------------------------- */

SPRE_API spre_status spre_dataset_create(size_t dim, size_t n, const double* points,
                                         const double* values, spre_dataset** out);
/* Header x_1,...,x_d,f[,cost]. */
SPRE_API spre_status spre_dataset_load_csv(const char* path, spre_dataset** out);
SPRE_API void spre_dataset_free(spre_dataset* data);
SPRE_API size_t spre_dataset_size(const spre_dataset* data);
SPRE_API size_t spre_dataset_dim(const spre_dataset* data);

/* ---- polynomial machinery ---------------------------------------------- */

/* out: n*size(A), row-major. */
SPRE_API spre_status spre_vandermonde(const spre_index_set* A, size_t n, const double* points,
                                      double* out);
SPRE_API spre_status spre_is_unisolvent(const spre_index_set* A, size_t n, const double* points,
                                        int* out);
/* Needs n = size(A). out: n weights. */
SPRE_API spre_status spre_lagrange_at_zero(const spre_index_set* A, size_t n, const double* points,
                                           double* out);
SPRE_API spre_status spre_lebesgue_at_zero(const spre_index_set* A, size_t n, const double* points,
                                           double* out);

/* ---- kernels ----------------------------------------------------------- */

SPRE_API size_t spre_kernel_parameter_count(spre_kernel_family family);
SPRE_API double spre_softplus(double z);
SPRE_API spre_status spre_kernel_eval(spre_kernel_family family, const double* theta, size_t n_theta,
                                      size_t dim, const double* x, const double* y, double* out);

/* ---- extrapolation ----------------------------------------------------- */

/* theta may be NULL for the initial parameters (all ones). */
SPRE_API spre_status spre_model_fit(const spre_index_set* A, spre_kernel_family family,
                                    const double* theta, size_t n_theta, const spre_dataset* data,
                                    spre_model** out);
/* Fits theta by LOOCV for the given index set. */
SPRE_API spre_status spre_model_fit_optimized(const spre_index_set* A, spre_kernel_family family,
                                              const spre_dataset* data, spre_model** out);
/* Stepwise index-set selection followed by a fit. */
SPRE_API spre_status spre_model_fit_stepwise(const spre_dataset* data, spre_kernel_family family,
                                             spre_model** out);
SPRE_API void spre_model_free(spre_model* model);
SPRE_API spre_status spre_model_predict(const spre_model* model, const double* x_star, double* mean,
                                        double* variance);
/* out: size(A) coefficients. */
SPRE_API spre_status spre_model_beta(const spre_model* model, double* out);
/* Writes up to `capacity` parameters and the full count to *count. */
SPRE_API spre_status spre_model_theta(const spre_model* model, double* out, size_t capacity,
                                      size_t* count);
SPRE_API spre_status spre_model_index_set(const spre_model* model, spre_index_set** out);

/* Polynomial interpolation at 0; needs n = size(A). */
SPRE_API spre_status spre_mre_extrapolate(const spre_index_set* A, const spre_dataset* data,
                                          double* out);
/* MRE on the size(A) points nearest the origin. */
SPRE_API spre_status spre_mre_nearest(const spre_index_set* A, const spre_dataset* data, double* out);
/* Constant-mean GP with covariance sigma^2 eps(x) eps(y) delta(x,y), where
 * eps(x) = sum of x^alpha over the n_lead exponent vectors in `lead`. */
SPRE_API spre_status spre_gre_predict(const spre_dataset* data, size_t n_lead, const int* lead,
                                      double sigma2_theta, const double* x_star, double* mean,
                                      double* variance);
SPRE_API spre_status spre_block_mean(const spre_index_set* A, spre_kernel_family family,
                                     const double* theta, size_t n_theta, const spre_dataset* data,
                                     const double* x_star, double* out);
SPRE_API spre_status spre_power_function_sq(const spre_index_set* A, spre_kernel_family family,
                                            const double* theta, size_t n_theta, size_t n,
                                            const double* points, const double* x, double* out);

/* ---- model selection ---------------------------------------------------- */

SPRE_API spre_status spre_loocv(const spre_index_set* A, spre_kernel_family family,
                                const double* theta, size_t n_theta, const spre_dataset* data,
                                double* out);
/* theta_out holds spre_kernel_parameter_count(family) values. */
SPRE_API spre_status spre_optimize_kernel(const spre_index_set* A, spre_kernel_family family,
                                          const spre_dataset* data, double* theta_out,
                                          double* objective);
/* Selection trace as JSON: chosen_A, kernel, theta, objective, history. */
SPRE_API spre_status spre_stepwise_select_json(const spre_dataset* data, spre_kernel_family family,
                                               char** json_out);

/* ---- experimental design ------------------------------------------------ */

/* Cost c(x) = prod 1/x_j. Proposal as JSON. */
SPRE_API spre_status spre_propose_design_json(const spre_model* model, double budget,
                                              size_t n_candidates, uint64_t seed, char** json_out);

/* ---- problems ------------------------------------------------------------ */

SPRE_API spre_status spre_cubature_eval(size_t d, int s, const double* widths, double* out);
SPRE_API spre_status spre_cubature_truth(size_t d, int s, double* out);
SPRE_API spre_status spre_ed_synthetic_eval(uint64_t seed, const double* x, double* out);
/* Writes up to `capacity` doubles; *n and *dim receive the design shape. */
SPRE_API spre_status spre_reference_design(const char* name, double* out, size_t capacity, size_t* n,
                                           size_t* dim);

typedef struct spre_flock_params {
  int n_agents;
  double domain;
  double repulsion_radius;
  double interaction_radius;
  double x1;
  double x2;
  double x3;
  uint64_t seed;
  double t_final;
  int tracked_agent;
  spre_repulsion repulsion;
} spre_flock_params;

SPRE_API void spre_flock_params_default(spre_flock_params* p);
SPRE_API spre_status spre_flock_qoi(const spre_flock_params* p, double* out);
/* Trajectory CSV (t,agent,u_1,u_2) for every step. */
SPRE_API spre_status spre_flock_trajectory_csv(const spre_flock_params* p, char** csv_out);

/* ---- experiment runner ---------------------------------------------------- */

/* command: "converge", "calibrate", "sparsity", "design", "flock" or "fit".
 * config_json: experiment configuration. Returns CSV for converge/calibrate
 * and JSON otherwise. */
SPRE_API spre_status spre_run_experiment(const char* command, const char* config_json, char** out);
/* Convergence slope over (h, abs_error) pairs; NaN when too few usable rows. */
SPRE_API double spre_convergence_slope(size_t n, const double* h, const double* abs_error,
                                       double truth);

#ifdef __cplusplus
}
#endif

#endif /* SPRE_SPRE_H */
