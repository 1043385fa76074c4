/* gglopt: sparse inverse covariance estimation for single and multiple
 * Gaussian graphical models, with optional latent low-rank components.
 *
 * All functions are thread-safe as long as each handle is used by one thread
 * at a time. Matrices cross the boundary as dense row-major double buffers of
 * length dim*dim. Functions returning gglopt_status leave their outputs
 * untouched on failure; gglopt_last_error() describes the most recent failure
 * on the calling thread.
 */
#ifndef GGLOPT_H_
#define GGLOPT_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define GGLOPT_API __declspec(dllexport)
#else
#define GGLOPT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gglopt_status {
  GGLOPT_OK = 0,
  GGLOPT_ERR_ARG = 1,      /* null handle, bad index, bad enum value */
  GGLOPT_ERR_INPUT = 2,    /* data or parameters failed validation */
  GGLOPT_ERR_NUMERIC = 3,  /* linear algebra failure (non-PD matrix, ...) */
  GGLOPT_ERR_NO_MODEL = 4, /* model selection: no grid point converged */
  GGLOPT_ERR_INTERNAL = 5
} gglopt_status;

typedef enum gglopt_family {
  GGLOPT_FAMILY_SGL = 0, /* single instance, elementwise l1 */
  GGLOPT_FAMILY_GGL = 1, /* multiple instances, l1 + groupwise l2 across instances */
  GGLOPT_FAMILY_FGL = 2  /* multiple ordered instances, l1 + fused differences */
} gglopt_family;

typedef struct gglopt_problem gglopt_problem;
typedef struct gglopt_solution gglopt_solution;
typedef struct gglopt_selection gglopt_selection;
typedef struct gglopt_dataset gglopt_dataset;

/* ---- library ---- */

GGLOPT_API const char* gglopt_version(void);

/* Message for the most recent failed call on this thread; empty string when
 * nothing failed yet. The pointer stays valid until the next failure. */
GGLOPT_API const char* gglopt_last_error(void);

/* Name of the random number generator behind all seeded generation. */
GGLOPT_API const char* gglopt_rng_algorithm(void);

/* ---- problem setup ---- */

/* A problem holds `instances` covariance matrices of size dim x dim plus the
 * penalty and solver settings. Returns NULL on invalid sizes. */
GGLOPT_API gglopt_problem* gglopt_problem_new(int dim, int instances);
GGLOPT_API void gglopt_problem_free(gglopt_problem* prob);

GGLOPT_API gglopt_status gglopt_problem_set_covariance(gglopt_problem* prob, int instance,
                                                       const double* row_major, int n_samples);

GGLOPT_API gglopt_status gglopt_problem_set_penalty(gglopt_problem* prob, gglopt_family family,
                                                    double lambda1, double lambda2);

/* Enables the latent low-rank component with one nuclear-norm weight per
 * instance (count must equal the instance count); NULL disables it. */
GGLOPT_API gglopt_status gglopt_problem_set_latent(gglopt_problem* prob, const double* mu1,
                                                   int count);

/* adaptive_rho and scale_to_correlation are booleans (0/1). */
GGLOPT_API gglopt_status gglopt_problem_set_options(gglopt_problem* prob, double rho_init,
                                                    int max_iter, double eps_abs, double eps_rel,
                                                    int adaptive_rho, int scale_to_correlation);

/* ---- solving ---- */

/* Runs the solver for the configured penalty. Non-convergence is not an
 * error: inspect the diagnostics. */
GGLOPT_API gglopt_status gglopt_solve(const gglopt_problem* prob, gglopt_solution** out);

/* Covariance-thresholding fast path; requires the SGL family without the
 * latent component. Solves the connected components independently. */
GGLOPT_API gglopt_status gglopt_solve_blockwise(const gglopt_problem* prob,
                                                gglopt_solution** out);

GGLOPT_API void gglopt_solution_free(gglopt_solution* sol);

GGLOPT_API int gglopt_solution_dim(const gglopt_solution* sol);
GGLOPT_API int gglopt_solution_instances(const gglopt_solution* sol);

/* Copies the estimate for one instance into out (dim*dim doubles). */
GGLOPT_API gglopt_status gglopt_solution_theta(const gglopt_solution* sol, int instance,
                                               double* out);
GGLOPT_API gglopt_status gglopt_solution_lowrank(const gglopt_solution* sol, int instance,
                                                 double* out);

/* Any output pointer may be NULL to skip that field. */
GGLOPT_API gglopt_status gglopt_solution_diagnostics(const gglopt_solution* sol, int* iterations,
                                                     double* primal_residual,
                                                     double* dual_residual, double* objective,
                                                     int* converged, double* wall_seconds);

/* Max-norm of the stationarity violation of sol for prob's penalty; a
 * solver-independent accuracy measure. */
GGLOPT_API gglopt_status gglopt_kkt_residual(const gglopt_problem* prob,
                                             const gglopt_solution* sol, double* out);

/* Connected-component structure of instance 0's covariance after screening
 * off-diagonal entries at lambda1. */
GGLOPT_API gglopt_status gglopt_component_stats(const gglopt_problem* prob, double lambda1,
                                                int* component_count, int* largest_component);

/* ---- model selection ---- */

/* Log-spaced lambda1 candidates (descending, two decades below the largest
 * off-diagonal covariance magnitude); fills out with `count` values. */
GGLOPT_API gglopt_status gglopt_default_lambda_grid(const gglopt_problem* prob, int count,
                                                    double* out);

/* Grid search scored by the extended BIC at the given gamma. lambda2 applies
 * to GGL/FGL only (pass NULL/0 otherwise); a nonempty mu1 grid searches
 * latent models. The winner is re-solved at tightened tolerance. Fails with
 * GGLOPT_ERR_NO_MODEL when nothing converges. */
GGLOPT_API gglopt_status gglopt_select(const gglopt_problem* prob, const double* lambda1_values,
                                       int n_lambda1, const double* lambda2_values, int n_lambda2,
                                       const double* mu1_values, int n_mu1, double gamma,
                                       gglopt_selection** out);

GGLOPT_API void gglopt_selection_free(gglopt_selection* sel);

GGLOPT_API int gglopt_selection_size(const gglopt_selection* sel);
GGLOPT_API int gglopt_selection_best(const gglopt_selection* sel);

/* Any output pointer may be NULL. ebic is +inf for non-converged entries. */
GGLOPT_API gglopt_status gglopt_selection_entry(const gglopt_selection* sel, int index,
                                                double* lambda1, double* lambda2, double* mu1,
                                                double* ebic, int* converged);
GGLOPT_API gglopt_status gglopt_selection_edge_count(const gglopt_selection* sel, int index,
                                                     int instance, int* out);

/* New handle for the winning model's solution; free it separately. */
GGLOPT_API gglopt_status gglopt_selection_solution(const gglopt_selection* sel,
                                                   gglopt_solution** out);

/* ---- synthetic data ---- */

/* Random sparse SPD precision matrix (edge density, signed weights with
 * magnitude in [weight_lo, weight_hi]) and its covariance. */
GGLOPT_API gglopt_status gglopt_generate(int dim, double edge_probability, double weight_lo,
                                         double weight_hi, uint64_t seed, gglopt_dataset** out);

/* Same, plus `confounders` hidden variables marginalized out: the observed
 * precision equals the sparse matrix minus a PSD low-rank component. */
GGLOPT_API gglopt_status gglopt_generate_latent(int dim, int confounders, double edge_probability,
                                                double confounder_density, double weight_lo,
                                                double weight_hi, uint64_t seed,
                                                gglopt_dataset** out);

GGLOPT_API void gglopt_dataset_free(gglopt_dataset* data);

GGLOPT_API int gglopt_dataset_dim(const gglopt_dataset* data);
GGLOPT_API int gglopt_dataset_has_latent(const gglopt_dataset* data);
GGLOPT_API int gglopt_dataset_edge_count(const gglopt_dataset* data);

/* Sparse precision component (equals the full precision when non-latent). */
GGLOPT_API gglopt_status gglopt_dataset_precision(const gglopt_dataset* data, double* out);
/* Covariance of the observed variables (inverse of precision - lowrank). */
GGLOPT_API gglopt_status gglopt_dataset_covariance(const gglopt_dataset* data, double* out);
/* Low-rank component; all zeros when non-latent. */
GGLOPT_API gglopt_status gglopt_dataset_lowrank(const gglopt_dataset* data, double* out);

/* Fills parallel arrays (length edge_count) with the true support:
 * strictly-upper indices and the precision entry. */
GGLOPT_API gglopt_status gglopt_dataset_edges(const gglopt_dataset* data, int* i_out, int* j_out,
                                              double* weight_out);

/* Empirical covariance of n_samples zero-mean Gaussian draws from the
 * dataset's covariance (1/N normalization), written to out (dim*dim). */
GGLOPT_API gglopt_status gglopt_sample_covariance(const gglopt_dataset* data, int n_samples,
                                                  uint64_t seed, double* out);

#ifdef __cplusplus
}
#endif

#endif /* GGLOPT_H_ */
