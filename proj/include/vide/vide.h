/*
 * vide.h - C interface to the Volterra integro-differential equation solver.
 *
 * All objects are opaque handles created by vide_*_create / lookup calls
 * and released with the matching *_destroy. Every fallible call returns a
 * vide_status; on failure a human-readable message is available from
 * vide_last_error_message() on the calling thread.
 */
#ifndef VIDE_VIDE_H
#define VIDE_VIDE_H

#include <stddef.h>

#if defined(VIDE_BUILDING_LIBRARY)
#define VIDE_API __attribute__((visibility("default")))
#else
#define VIDE_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vide_status {
    VIDE_OK = 0,
    VIDE_ERR_INVALID_ARGUMENT = 1, /* null pointer, bad enum, bad size */
    VIDE_ERR_DOMAIN = 2,           /* precondition violated (mesh, interval, grid) */
    VIDE_ERR_LOOKUP = 3,           /* unknown registry name */
    VIDE_ERR_CONVERGENCE = 4,      /* Newton did not converge */
    VIDE_ERR_SINGULAR = 5,         /* Newton derivative / Jacobian singular */
    VIDE_ERR_DIVERGENCE = 6,       /* solution non-finite or above 1e150 */
    VIDE_ERR_NUMERIC = 7,          /* eigenvalue iteration failed */
    VIDE_ERR_TOLERANCE_UNREACHABLE = 8,
    VIDE_ERR_STABILITY_NOT_FOUND = 9,
    VIDE_ERR_CALLBACK = 10,        /* a user callback reported failure */
    VIDE_ERR_INTERNAL = 11
} vide_status;

typedef enum vide_method { VIDE_IMPLICIT = 0, VIDE_EXPLICIT = 1 } vide_method;

typedef enum vide_newton_variant {
    VIDE_NEWTON_SECOND_ORDER = 0,
    VIDE_NEWTON_THIRD_ORDER = 1
} vide_newton_variant;

typedef struct vide_newton_config {
    double tol;
    int max_iter;
    vide_newton_variant variant;
    double fd_step_scale;
} vide_newton_config;

typedef struct vide_problem vide_problem;
typedef struct vide_trajectory vide_trajectory;
typedef struct vide_stability_grid vide_stability_grid;
typedef struct vide_tableau vide_tableau;

/* Scalar callbacks return 0 on success; any other value aborts the call
 * with VIDE_ERR_CALLBACK. */
typedef int (*vide_scalar_fn)(void* user, double x, double y, double* out);
typedef int (*vide_kernel_fn)(void* user, double x, double y, double t, double* out);
/* System callbacks write m values (or m*m row-major for Jacobians). */
typedef int (*vide_vector_fn)(void* user, double x, const double* y, double* out);
typedef int (*vide_vector_kernel_fn)(void* user, double x, const double* y, double t, double* out);

/* ---- errors ------------------------------------------------------------ */

VIDE_API const char* vide_status_string(vide_status status);
/* Message of the last failed call on this thread ("" if none). */
VIDE_API const char* vide_last_error_message(void);
/* Node index of the last VIDE_ERR_DIVERGENCE on this thread, or -1. */
VIDE_API long long vide_last_error_node(void);

VIDE_API void vide_newton_config_default(vide_newton_config* cfg);

/* ---- problems ---------------------------------------------------------- */

/* name: "example1" | "example2" | "example3" | "test". "test" needs
 * lambda_gamma = {lambda, gamma} and uses [x0, x_end]; the examples ignore
 * both and use [0, 10]. */
VIDE_API vide_status vide_problem_from_registry(const char* name, const double* lambda_gamma,
                                                double x0, double x_end, vide_problem** out);

/* y' = lambda (y - 1) + gamma integral_{x0}^x y dt, y(x0) = 2. */
VIDE_API vide_status vide_problem_linear(double lambda, double gamma, double x0, double x_end,
                                         vide_problem** out);

/* Derivative callbacks may be NULL (finite differences are used). */
VIDE_API vide_status vide_problem_create_scalar(vide_scalar_fn f, vide_kernel_fn K,
                                                vide_scalar_fn df_dy, vide_kernel_fn dK_dy,
                                                void* user, double x0, double x_end, double y0,
                                                vide_problem** out);

/* y^(n) = f(x, y) + integral K(x, y(t), t) dt with initial_values[0..n-1] =
 * y(x0), y'(x0), ..., y^(n-1)(x0). */
VIDE_API vide_status vide_problem_create_order_n(size_t n, vide_scalar_fn f, vide_kernel_fn K,
                                                 void* user, const double* initial_values,
                                                 double x0, double x_end, vide_problem** out);

/* jacobian_f / jacobian_K may be NULL. */
VIDE_API vide_status vide_problem_create_system(size_t m, vide_vector_fn f,
                                                vide_vector_kernel_fn K, vide_vector_fn jacobian_f,
                                                vide_vector_kernel_fn jacobian_K, void* user,
                                                double x0, double x_end, const double* y0,
                                                vide_problem** out);

/* Opt in to O(N) solves for kernels that ignore their first argument. */
VIDE_API vide_status vide_problem_set_kernel_independent_of_x(vide_problem* p, int enabled);

VIDE_API void vide_problem_destroy(vide_problem* p);

typedef struct vide_problem_info {
    size_t components;
    double x0;
    double x_end;
    int has_linear_params; /* registry / linear problems only */
    double lambda;
    double gamma;
} vide_problem_info;

VIDE_API vide_status vide_problem_get_info(const vide_problem* p, vide_problem_info* out);

/* ---- solving ----------------------------------------------------------- */

/* cfg may be NULL for defaults. */
VIDE_API vide_status vide_solve(const vide_problem* p, size_t n_nodes, vide_method method,
                                const vide_newton_config* cfg, vide_trajectory** out);

VIDE_API void vide_trajectory_destroy(vide_trajectory* t);
VIDE_API size_t vide_trajectory_size(const vide_trajectory* t);
VIDE_API size_t vide_trajectory_components(const vide_trajectory* t);
VIDE_API double vide_trajectory_step(const vide_trajectory* t);
VIDE_API double vide_trajectory_x(const vide_trajectory* t, size_t i);
/* Row-major [size x components]. Valid until the trajectory is destroyed. */
VIDE_API const double* vide_trajectory_values(const vide_trajectory* t);
/* Newton iterations per implicit step (size - 1 entries), NULL for explicit. */
VIDE_API const int* vide_trajectory_newton_iterations(const vide_trajectory* t);

/* ---- Newton ------------------------------------------------------------ */

typedef double (*vide_real_fn)(void* user, double y);

typedef struct vide_newton_result {
    double root;
    int iterations;
    double residual;
} vide_newton_result;

/* Fsecond == NULL selects the quadratic variant, otherwise the cubic one. */
VIDE_API vide_status vide_newton(vide_real_fn F, vide_real_fn Fprime, vide_real_fn Fsecond,
                                 void* user, double y_init, const vide_newton_config* cfg,
                                 vide_newton_result* out);

/* ---- stability ----------------------------------------------------------- */

VIDE_API double vide_analytic_test_solution(double lambda, double gamma, double x);

typedef struct vide_verdict {
    int stable;
    size_t first_exceed_index; /* 0 when stable */
} vide_verdict;

VIDE_API vide_status vide_stability_verdict(vide_method method, double z, double w,
                                            size_t i_max, double bound, vide_verdict* out);

typedef struct vide_grid_spec {
    double z_min, z_max, w_min, w_max;
    size_t nz, nw;
    size_t i_max;
    double bound;
} vide_grid_spec;

VIDE_API void vide_grid_spec_default(vide_grid_spec* spec);

VIDE_API vide_status vide_sweep_region(const vide_grid_spec* spec, vide_method method,
                                       unsigned threads, vide_stability_grid** out);
VIDE_API void vide_stability_grid_destroy(vide_stability_grid* g);
VIDE_API vide_status vide_stability_grid_get_spec(const vide_stability_grid* g, vide_grid_spec* out);
/* Cell p along z, q along w. */
VIDE_API vide_status vide_stability_grid_cell(const vide_stability_grid* g, size_t p, size_t q,
                                              double* z, double* w, vide_verdict* verdict);
VIDE_API size_t vide_stability_grid_stable_count(const vide_stability_grid* g);

/* Writes z[k] = h[k] lambda, w[k] = h[k]^2 gamma. */
VIDE_API vide_status vide_h_path(double lambda, double gamma, const double* h, size_t count,
                                 double* z, double* w);

typedef struct vide_eigen_pair {
    double lambda_re, lambda_im;
    double gamma_re, gamma_im;
    int qualifies;
    double z, w;
} vide_eigen_pair;

/* J_f, J_K row-major m x m; out receives m pairs. */
VIDE_API vide_status vide_pair_eigenvalues(size_t m, const double* J_f, const double* J_K, double h,
                                           vide_eigen_pair* out);

/* ---- Richardson ------------------------------------------------------------ */

VIDE_API vide_status vide_build_tableau(const vide_problem* p, vide_method method,
                                        size_t coarse_nodes, const vide_newton_config* cfg,
                                        vide_tableau** out);

/* Doubles the coarse mesh from initial_coarse_nodes until |Y4 - Y5| <= eps.
 * n_nodes_out receives the finest-level node count. */
VIDE_API vide_status vide_nodes_for_tolerance(const vide_problem* p, vide_method method, double eps,
                                              size_t initial_coarse_nodes, size_t node_cap,
                                              size_t* n_nodes_out, vide_tableau** out);

VIDE_API void vide_tableau_destroy(vide_tableau* t);
VIDE_API size_t vide_tableau_coarse_size(const vide_tableau* t);
VIDE_API size_t vide_tableau_components(const vide_tableau* t);
VIDE_API double vide_tableau_coarse_x(const vide_tableau* t, size_t i);
VIDE_API double vide_tableau_error_estimate(const vide_tableau* t);
/* Column k in 1..5, row-major [coarse size x components]; NULL if k is out of range. */
VIDE_API const double* vide_tableau_column(const vide_tableau* t, size_t k);

typedef struct vide_stability_search {
    size_t n_nodes;
    double h_s;
    double z;
    double w;
} vide_stability_search;

/* p must carry linear parameters (registry or vide_problem_linear). */
VIDE_API vide_status vide_min_nodes_for_stability(const vide_problem* p, size_t node_cap,
                                                  vide_stability_search* out);

#ifdef __cplusplus
}
#endif

#endif /* VIDE_VIDE_H */
