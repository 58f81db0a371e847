/*
 * plap -- nonlocal p-Laplacian dynamics on graph sequences.
 *
 * C interface to the shared library. All objects are opaque handles created
 * and destroyed through this API; every fallible call returns a plap_status
 * and writes results through out-parameters. On failure the thread-local
 * message from plap_last_error() describes what went wrong. Indices are
 * 0-based. Norm orders are doubles; pass INFINITY for the max norm.
 */

#ifndef PLAP_H
#define PLAP_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define PLAP_API __attribute__((visibility("default")))
#else
#define PLAP_API
#endif

typedef enum plap_status {
  PLAP_OK = 0,
  PLAP_ERR_INVALID_ARGUMENT = 1,
  PLAP_ERR_CONFIG = 2,
  PLAP_ERR_DIMENSION = 3,
  PLAP_ERR_TYPE = 4,
  PLAP_ERR_DOMAIN = 5,
  PLAP_ERR_RESOLUTION = 6,
  PLAP_ERR_STABILITY = 7,
  PLAP_ERR_CONVERGENCE = 8,
  PLAP_ERR_INFEASIBLE = 9,
  PLAP_ERR_UNDEFINED_DIMENSION = 10,
  PLAP_ERR_DEGENERATE_FIT = 11,
  PLAP_ERR_PARSE = 12,
  PLAP_ERR_VALIDATION = 13,
  PLAP_ERR_GATE = 14,
  PLAP_ERR_IO = 15,
  PLAP_ERR_INTERNAL = 99
} plap_status;

typedef struct plap_graphon plap_graphon;
typedef struct plap_kernel plap_kernel;
typedef struct plap_grid_fn plap_grid_fn;
typedef struct plap_trajectory plap_trajectory;

/* ---- library ---- */

PLAP_API const char* plap_version(void);
PLAP_API const char* plap_status_name(plap_status status);
/* Message of the last failure on this thread; empty string if none. */
PLAP_API const char* plap_last_error(void);
/* Worker budget for experiment sweeps; <= 0 restores the hardware default.
 * Parallelism never changes computed artifacts. */
PLAP_API void plap_set_max_workers(int workers);

/* ---- kernel specifications ---- */

PLAP_API plap_status plap_graphon_create(const char* kind,
                                         const double* params,
                                         size_t n_params,
                                         plap_graphon** out);
PLAP_API void plap_graphon_free(plap_graphon* g);
PLAP_API plap_status plap_graphon_eval(const plap_graphon* g, double x,
                                       double y, double* out);
PLAP_API plap_status plap_graphon_is_indicator(const plap_graphon* g,
                                               int* out);
/* Static catalog of kernel kinds with parameters and regularity tags. */
PLAP_API const char* plap_kernel_catalog(void);

/* ---- discrete kernels ---- */

PLAP_API plap_status plap_kernel_quotient_average(const plap_graphon* g, int n,
                                                  int quad_points,
                                                  plap_kernel** out);
PLAP_API plap_status plap_kernel_collocation(const plap_graphon* g, int n,
                                             plap_kernel** out);
/* Simple-graph discretization: {0,1} weights from closed-cell sampling with
 * samples_per_axis >= 2 nodes per axis. Indicator kernels only. */
PLAP_API plap_status plap_kernel_simple_graph(const plap_graphon* g, int n,
                                              int samples_per_axis,
                                              plap_kernel** out);
PLAP_API plap_status plap_kernel_from_data(int n, const double* row_major,
                                           plap_kernel** out);
PLAP_API void plap_kernel_free(plap_kernel* k);
PLAP_API plap_status plap_kernel_size(const plap_kernel* k, int* out);
PLAP_API plap_status plap_kernel_entry(const plap_kernel* k, int i, int j,
                                       double* out);
PLAP_API plap_status plap_kernel_distance(const plap_kernel* a,
                                          const plap_kernel* b, double q,
                                          double* out);
PLAP_API plap_status plap_kernel_modulus_smoothness(const plap_kernel* k,
                                                    double h, double q,
                                                    double* out);
PLAP_API plap_status plap_kernel_write_csv(const plap_kernel* k,
                                           const char* path);
PLAP_API plap_status plap_kernel_read_csv(const char* path, plap_kernel** out);

/* Box-counting dimension of the support boundary. counts may be NULL;
 * otherwise it must hold n_levels entries. */
PLAP_API plap_status plap_boundary_dimension(const plap_graphon* g,
                                             const int* levels,
                                             size_t n_levels,
                                             int samples_per_axis, double* rho,
                                             long* counts);

/* ---- grid functions ---- */

PLAP_API plap_status plap_grid_fn_from_data(int n, const double* values,
                                            plap_grid_fn** out);
PLAP_API void plap_grid_fn_free(plap_grid_fn* u);
PLAP_API plap_status plap_grid_fn_size(const plap_grid_fn* u, int* out);
/* Copies all n values into buffer (buffer_len >= n). */
PLAP_API plap_status plap_grid_fn_values(const plap_grid_fn* u, double* buffer,
                                         size_t buffer_len);
PLAP_API plap_status plap_grid_fn_norm(const plap_grid_fn* u, double q,
                                       double* out);
PLAP_API plap_status plap_grid_fn_refine(const plap_grid_fn* u, int factor,
                                         plap_grid_fn** out);
PLAP_API plap_status plap_grid_fn_pairing(const plap_grid_fn* u,
                                          const plap_grid_fn* v, double* out);
PLAP_API plap_status plap_grid_fn_modulus_smoothness(const plap_grid_fn* u,
                                                     double h, double q,
                                                     double* out);
PLAP_API plap_status plap_grid_fn_write_csv(const plap_grid_fn* u,
                                            const char* path);
PLAP_API plap_status plap_grid_fn_read_csv(const char* path,
                                           plap_grid_fn** out);

/* ---- nonlocal operator ---- */

PLAP_API plap_status plap_apply_plaplacian(const plap_kernel* k,
                                           const plap_grid_fn* u, double p,
                                           plap_grid_fn** out);
PLAP_API plap_status plap_energy(const plap_kernel* k, const plap_grid_fn* u,
                                 double p, double* out);

/* ---- time integration ---- */

PLAP_API plap_status plap_forward_euler_fixed(const plap_kernel* k,
                                              const plap_grid_fn* g, double p,
                                              double tau, double horizon_t,
                                              long max_steps,
                                              plap_trajectory** out);
PLAP_API plap_status plap_forward_euler_adaptive(const plap_kernel* k,
                                                 const plap_grid_fn* g,
                                                 double p, double alpha_eps,
                                                 double alpha_nu,
                                                 double horizon_t,
                                                 long max_steps,
                                                 plap_trajectory** out);
/* inner_tol <= 0 selects the default 1e-10 * max(1, ||state||_2). */
PLAP_API plap_status plap_backward_euler(const plap_kernel* k,
                                         const plap_grid_fn* g, double p,
                                         double tau, double horizon_t,
                                         double inner_tol,
                                         plap_trajectory** out);
PLAP_API void plap_trajectory_free(plap_trajectory* t);
PLAP_API plap_status plap_trajectory_knots(const plap_trajectory* t,
                                           long* out);
PLAP_API plap_status plap_trajectory_time(const plap_trajectory* t, long h,
                                          double* out);
PLAP_API plap_status plap_trajectory_state(const plap_trajectory* t, long h,
                                           plap_grid_fn** out);
PLAP_API plap_status plap_trajectory_truncated(const plap_trajectory* t,
                                               int* out);
PLAP_API plap_status plap_interpolate_linear(const plap_trajectory* t,
                                             double time, plap_grid_fn** out);
PLAP_API plap_status plap_interpolate_constant(const plap_trajectory* t,
                                               double time,
                                               plap_grid_fn** out);
PLAP_API plap_status plap_interpolant_gap(const plap_trajectory* t, double q,
                                          const double* probes,
                                          size_t n_probes, double* out);
/* Writes the knot table and a <path>.meta sidecar. */
PLAP_API plap_status plap_trajectory_write_csv(const plap_trajectory* t,
                                               const char* path);

/* ---- large-p limit ---- */

PLAP_API plap_status plap_sinf_violation(const plap_kernel* k,
                                         double support_threshold,
                                         const plap_grid_fn* v, double* out);
PLAP_API plap_status plap_project_sinf(const plap_kernel* k,
                                       double support_threshold,
                                       const plap_grid_fn* v, double tol,
                                       plap_grid_fn** out);
/* tau_used and sup_deviation must hold n_p entries each. */
PLAP_API plap_status plap_p_sweep(const plap_kernel* k, const plap_grid_fn* g,
                                  const double* p_list, size_t n_p,
                                  double horizon_t, double tau,
                                  double* tau_used, double* sup_deviation);

/* ---- verification harness ---- */

PLAP_API plap_status plap_consistency_error(const plap_trajectory* a,
                                            const plap_trajectory* b, double q,
                                            const double* probes,
                                            size_t n_probes, double* out);
PLAP_API plap_status plap_fit_rate(const double* xs, const double* errs,
                                   size_t count, double* slope,
                                   double* intercept, double* r_squared);
PLAP_API plap_status plap_contraction_test(const plap_kernel* k, double p,
                                           double q, const plap_grid_fn* g1,
                                           const plap_grid_fn* g2,
                                           double horizon_t, double tau,
                                           double* lhs, double* rhs,
                                           int* pass);
/* Runs the seeded invariant suite; writes invariants.txt/.csv under
 * report_dir when non-NULL. *all_passed is 1 when every check held. */
PLAP_API plap_status plap_invariant_suite(uint64_t seed,
                                          const char* report_dir,
                                          int* all_passed);

/* ---- config-driven experiments ---- */

/* Runs the experiment described by the config file; artifacts land in the
 * config's output_dir (overridden by $PLAP_OUTPUT_DIR). Returns
 * PLAP_ERR_GATE when the run completed but a gated assertion failed. */
PLAP_API plap_status plap_run_config(const char* config_path);
/* The `verify` experiment: invariant suite + reports under output_dir
 * (NULL uses the default directory resolution). */
PLAP_API plap_status plap_verify(uint64_t seed, const char* output_dir);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PLAP_H */
