/*
 * nhflow C API: numerical laboratory for the nonlocal parabolic equation
 *   u_t = lap(u) + (|x|^{-1} * |u|^p) |u|^{p-2} u
 * on a box with zero Dirichlet data (n = 3).
 *
 * All functions return nhf_status unless the result is a plain scalar that
 * cannot fail. On error, nhf_last_error() carries a thread-local message.
 * Every created handle must be released with the matching _free call.
 */
#ifndef NHF_NHFLOW_H
#define NHF_NHFLOW_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define NHF_API __declspec(dllexport)
#else
#define NHF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nhf_status {
    NHF_OK = 0,
    NHF_ERR_INVALID_ARGUMENT = 1,
    NHF_ERR_DOMAIN_MISMATCH = 2,
    NHF_ERR_NOT_CONVERGED = 3,
    NHF_ERR_INFEASIBLE = 4,
    NHF_ERR_IO = 5,
    NHF_ERR_INTERNAL = 6
} nhf_status;

NHF_API const char* nhf_last_error(void);
NHF_API const char* nhf_version(void);

/* ---- domain ---------------------------------------------------------- */

typedef struct nhf_domain nhf_domain;

NHF_API nhf_status nhf_domain_create(double lx, double ly, double lz, int m,
                                     nhf_domain** out);
NHF_API void nhf_domain_free(nhf_domain* d);
NHF_API int nhf_domain_resolution(const nhf_domain* d);
NHF_API double nhf_domain_spacing(const nhf_domain* d);
NHF_API double nhf_domain_volume(const nhf_domain* d);
NHF_API double nhf_domain_diameter(const nhf_domain* d);
NHF_API void nhf_domain_lengths(const nhf_domain* d, double out[3]);
/* First eigenvalue of the discrete Dirichlet Laplacian. */
NHF_API double nhf_domain_first_eigenvalue(const nhf_domain* d);

/* ---- fields ---------------------------------------------------------- */

typedef struct nhf_field nhf_field;

/* values may be NULL for the zero field; length must be m^3, row-major
 * interior order (x slowest, z fastest). */
NHF_API nhf_status nhf_field_create(const nhf_domain* d, const double* values,
                                    nhf_field** out);
NHF_API void nhf_field_free(nhf_field* f);
NHF_API nhf_status nhf_field_copy(const nhf_field* f, nhf_field** out);
NHF_API size_t nhf_field_size(const nhf_field* f);
NHF_API nhf_status nhf_field_values(const nhf_field* f, double* out_values);
NHF_API nhf_status nhf_field_scale(nhf_field* f, double c);
/* y += a * x */
NHF_API nhf_status nhf_field_axpy(nhf_field* y, double a, const nhf_field* x);
NHF_API nhf_status nhf_field_add_bump(nhf_field* f, const double center[3],
                                      double radius, double amplitude,
                                      const char* profile /* "cos2" | "gauss" */);
NHF_API nhf_status nhf_field_random_smooth(const nhf_domain* d, uint64_t seed,
                                           int max_mode, nhf_field** out);
NHF_API nhf_status nhf_field_first_eigenvector(const nhf_domain* d, nhf_field** out);

NHF_API double nhf_field_l2_norm_sq(const nhf_field* f);
NHF_API double nhf_field_h1_seminorm_sq(const nhf_field* f);
NHF_API double nhf_field_sup_norm(const nhf_field* f);
NHF_API nhf_status nhf_field_lp_norm(const nhf_field* f, double q, double* out);

/* Writes <base>.f64 + <base>.json (binary payload + checksummed sidecar). */
NHF_API nhf_status nhf_field_save(const nhf_field* f, const char* path_base, double p);
NHF_API nhf_status nhf_field_load(const char* path_base, nhf_field** out,
                                  double* p_out /* may be NULL */);

/* ---- problem: kernel table + exponent -------------------------------- */

typedef struct nhf_problem nhf_problem;

NHF_API nhf_status nhf_problem_create(const nhf_domain* d, double p, nhf_problem** out);
NHF_API void nhf_problem_free(nhf_problem* pb);
NHF_API double nhf_problem_exponent(const nhf_problem* pb);
/* min kernel weight, max kernel weight, max |w(d) - w(-d)|. */
NHF_API nhf_status nhf_problem_kernel_stats(const nhf_problem* pb, double* min_weight,
                                            double* max_weight, double* max_asymmetry);
/* Test hook: flip one kernel weight negative (self-test negative check). */
NHF_API nhf_status nhf_problem_corrupt_kernel(nhf_problem* pb);

/* z(u) = integral of |u(y)|^p / |x-y| over the box; fast = FFT path,
 * fast = 0 the exact O(N^2) summation. */
NHF_API nhf_status nhf_riesz_potential(const nhf_problem* pb, const nhf_field* u,
                                       int fast, nhf_field** out);
/* D(u,v) = double integral of |u(y)|^p |v(x)|^p / |x-y|. */
NHF_API nhf_status nhf_interaction(const nhf_problem* pb, const nhf_field* u,
                                   const nhf_field* v, double* out);

typedef struct nhf_functional_report {
    double energy;            /* J */
    double nehari;            /* I */
    double grad_sq;           /* ||grad u||^2 */
    double l2_sq;             /* ||u||^2 */
    double self_interaction;  /* D(u,u) */
    double sup;               /* ||u||_inf */
} nhf_functional_report;

NHF_API nhf_status nhf_evaluate(const nhf_problem* pb, const nhf_field* u,
                                nhf_functional_report* out);
/* Strong-form residual -lap_h u - z(u)|u|^{p-2}u (the L2 gradient of J). */
NHF_API nhf_status nhf_residual(const nhf_problem* pb, const nhf_field* u,
                                nhf_field** out);
NHF_API nhf_status nhf_fibering_t_star(const nhf_problem* pb, const nhf_field* u,
                                       double* out);
NHF_API nhf_status nhf_mountain_level(const nhf_problem* pb, const nhf_field* u,
                                      double* out);

/* ---- flow ------------------------------------------------------------ */

typedef struct nhf_flow_config {
    double dt_init;
    double dt_min;
    double dt_max;
    double cfl_c;
    double t_horizon;
    double blowup_sup_threshold;
    double decay_l2_threshold;
    int trace_stride;
    int energy_backtrack; /* 0/1 */
} nhf_flow_config;

NHF_API void nhf_flow_config_default(nhf_flow_config* cfg);

typedef enum nhf_verdict {
    NHF_VERDICT_GLOBAL_DECAY = 0,
    NHF_VERDICT_BLOW_UP = 1,
    NHF_VERDICT_UNDETERMINED = 2
} nhf_verdict;

typedef struct nhf_trace_row {
    int64_t step;
    double t, dt, l2, h1, sup, energy, nehari, ut_l2;
} nhf_trace_row;

typedef struct nhf_flow_result nhf_flow_result;

NHF_API nhf_status nhf_flow_run(const nhf_problem* pb, const nhf_field* u0,
                                const nhf_flow_config* cfg, nhf_flow_result** out);
NHF_API void nhf_flow_result_free(nhf_flow_result* r);
NHF_API nhf_verdict nhf_flow_verdict(const nhf_flow_result* r);
NHF_API double nhf_flow_t_final(const nhf_flow_result* r);
NHF_API const char* nhf_flow_certificate(const nhf_flow_result* r);
NHF_API void nhf_flow_bound_flags(const nhf_flow_result* r, int* prop41_l2_bound,
                                  int* i_sign_persisted);
NHF_API size_t nhf_flow_trace_rows(const nhf_flow_result* r);
NHF_API nhf_status nhf_flow_trace_row(const nhf_flow_result* r, size_t i,
                                      nhf_trace_row* out);
NHF_API nhf_status nhf_flow_final_field(const nhf_flow_result* r, nhf_field** out);
/* CSV with header step,t,dt,l2,h1,sup,J,I,ut_l2 at 17 significant digits. */
NHF_API nhf_status nhf_flow_write_trace_csv(const nhf_flow_result* r, const char* path);
/* JSON object {"verdict","t_final","certificate","bounds"}. */
NHF_API nhf_status nhf_flow_summary_json(const nhf_flow_result* r, char* buf,
                                         size_t cap, size_t* needed);

/* Max defects of dJ/dt = -||u_t||^2 and d||u||^2/dt = -2I over the trace. */
NHF_API nhf_status nhf_flow_verify_identities(const nhf_flow_result* r,
                                              double* max_energy_defect,
                                              double* max_l2_defect);
/* Row-wise 0 <= J <= J0 and (p-1) lambda1 ||u||^2 <= 2p J0 scan; requires a
 * GlobalDecay verdict. max_h1 reports sup_t ||grad u||. */
NHF_API nhf_status nhf_flow_check_bounds(const nhf_problem* pb, const nhf_flow_result* r,
                                         int* pass, int64_t* first_bad_row,
                                         double* max_h1);

/* ---- variational ------------------------------------------------------ */

typedef struct nhf_stationary_result nhf_stationary_result;

typedef struct nhf_stationary_info {
    double mu;
    double psi_min;
    double residual_rel;
    double energy;  /* J(u*) */
    double nehari;  /* I(u*) */
    int positive;
    int iterations;
} nhf_stationary_info;

/* seed may be NULL for the default central bump. */
NHF_API nhf_status nhf_stationary_solve(const nhf_problem* pb, const nhf_field* seed,
                                        double tol_residual, int max_iterations,
                                        nhf_stationary_result** out);
NHF_API void nhf_stationary_result_free(nhf_stationary_result* r);
NHF_API nhf_status nhf_stationary_info_get(const nhf_stationary_result* r,
                                           nhf_stationary_info* out);
NHF_API nhf_status nhf_stationary_field(const nhf_stationary_result* r, nhf_field** out);
NHF_API nhf_status nhf_stationary_json(const nhf_stationary_result* r,
                                       const char* field_ref, char* buf, size_t cap,
                                       size_t* needed);

typedef struct nhf_depth_result nhf_depth_result;

typedef struct nhf_depth_info {
    double d_est;
    int starts;
    int converged;
    double spread_rel;
} nhf_depth_info;

NHF_API nhf_status nhf_well_depth(const nhf_problem* pb, int n_starts, uint64_t seed,
                                  int threads, nhf_depth_result** out);
NHF_API void nhf_depth_result_free(nhf_depth_result* r);
NHF_API nhf_status nhf_depth_info_get(const nhf_depth_result* r, nhf_depth_info* out);
NHF_API nhf_status nhf_depth_best_field(const nhf_depth_result* r, nhf_field** out);
NHF_API nhf_status nhf_depth_json(const nhf_depth_result* r, const char* field_ref,
                                  char* buf, size_t cap, size_t* needed);

typedef struct nhf_threshold_report {
    double a;
    double lambda_closed_upper; /* Lambda_closed: proved sup bound */
    double lambda_sample_min;   /* lambda_sample: min ||u|| over samples */
    double lambda_sample_max;   /* Lambda_sample: max ||u|| over samples */
    int sample_count;
} nhf_threshold_report;

NHF_API nhf_status nhf_thresholds(const nhf_problem* pb, double a, int n_samples,
                                  uint64_t seed, nhf_threshold_report* out);
NHF_API nhf_status nhf_thresholds_json(const nhf_threshold_report* rep, char* buf,
                                       size_t cap, size_t* needed);
NHF_API double nhf_threshold_closed_form(const nhf_domain* d, double p, double a);

/* ---- constructions ---------------------------------------------------- */

NHF_API nhf_status nhf_dichotomy_pair(const nhf_problem* pb, const nhf_field* u_star,
                                      nhf_field** u_plus, nhf_field** u_minus);

typedef struct nhf_lemma54_info {
    double scale;
    double criterion_lhs;
    double criterion_rhs;
    double energy;
    double nehari;
} nhf_lemma54_info;

NHF_API nhf_status nhf_lemma54_datum(const nhf_problem* pb, const nhf_field* profile,
                                     nhf_field** out, nhf_lemma54_info* info);

typedef struct nhf_recipe nhf_recipe;

typedef struct nhf_recipe_info {
    double target_energy; /* M */
    double alpha;
    double c0;
    double kappa;
    double energy;        /* J(u_M) */
    double nehari;        /* I(u_M) */
    double criterion_lhs;
    double criterion_rhs;
} nhf_recipe_info;

typedef enum nhf_recipe_part {
    NHF_RECIPE_U_M = 0,
    NHF_RECIPE_V = 1,
    NHF_RECIPE_W = 2
} nhf_recipe_part;

NHF_API nhf_status nhf_high_energy_datum(const nhf_problem* pb, double target_energy,
                                         double c0_init, int max_retries,
                                         nhf_recipe** out);
NHF_API void nhf_recipe_free(nhf_recipe* r);
NHF_API nhf_status nhf_recipe_info_get(const nhf_recipe* r, nhf_recipe_info* out);
NHF_API nhf_status nhf_recipe_field(const nhf_recipe* r, nhf_recipe_part part,
                                    nhf_field** out);
/* Writes recipe.json plus u_M/v/w field files under dir. */
NHF_API nhf_status nhf_recipe_write(const nhf_recipe* r, const char* dir);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* NHF_NHFLOW_H */
