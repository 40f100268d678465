#ifndef NSPROFILE_NSPROFILE_H
#define NSPROFILE_NSPROFILE_H

#include <stddef.h>

#if defined(NSPROFILE_BUILDING_LIBRARY)
#define NSP_API __attribute__((visibility("default")))
#else
#define NSP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nsp_status {
  NSP_OK = 0,
  NSP_ERR_INVALID_ARGUMENT = 1,
  NSP_ERR_CONFIG = 2,
  NSP_ERR_NUMERICAL = 3,
  NSP_ERR_IO = 4,
  NSP_ERR_UNKNOWN_SUBCOMMAND = 5,
  NSP_ERR_INTERNAL = 6
} nsp_status;

typedef enum nsp_branch { NSP_BRANCH_COMPLEX = 0, NSP_BRANCH_DOUBLE = 1, NSP_BRANCH_REAL = 2 } nsp_branch;

/* Message for the last failing call on this thread; empty after success. */
NSP_API const char* nsp_last_error_message(void);
NSP_API const char* nsp_status_name(nsp_status status);
NSP_API const char* nsp_version(void);

/* Model: coefficients plus Gaussian initial data v0 = P0 G_s, rho0 = Q0 G_s. */
typedef struct nsp_model nsp_model;

NSP_API nsp_status nsp_model_create(double alpha, double beta, double gamma, int n, const double* P0,
                                    double Q0, double width, nsp_model** out);
NSP_API void nsp_model_destroy(nsp_model* model);

/* Complex arrays are interleaved (re, im); v has n complex entries. */
NSP_API nsp_status nsp_solve_exact(const nsp_model* model, const double* xi, double t, double* v_out,
                                   double* rho_out);
NSP_API nsp_status nsp_solve_rk4(const nsp_model* model, const double* xi, double t, double step,
                                 double* v_out, double* rho_out);
NSP_API nsp_status nsp_velocity_profile(const nsp_model* model, const double* xi, double t, double* v_out);
NSP_API nsp_status nsp_density_profile(const nsp_model* model, const double* xi, double t, double* rho_out);

/* sigma holds (re1, im1, re2, im2). */
NSP_API nsp_status nsp_eigenvalues(const nsp_model* model, double r, double* sigma, nsp_branch* branch);

NSP_API nsp_status nsp_energy(const nsp_model* model, const double* xi, double t, double* out);

/* I(t) at the given tolerance; limit receives the large-t value of t^{n/2} I(t). */
NSP_API nsp_status nsp_i_integral(const nsp_model* model, double t, double rel_tol, double* value,
                                  double* limit);

NSP_API nsp_status nsp_lemma22_constants(double* L, double* M);
NSP_API nsp_status nsp_sphere_area(int n, double* out);

/* Runner: batch workflows driven by a flat JSON configuration. */
typedef struct nsp_runner nsp_runner;

NSP_API nsp_status nsp_runner_create_from_file(const char* path, nsp_runner** out);
NSP_API nsp_status nsp_runner_create_from_json(const char* json_text, nsp_runner** out);
NSP_API nsp_status nsp_runner_set_threads(nsp_runner* runner, int threads);
NSP_API nsp_status nsp_runner_set_output_dir(nsp_runner* runner, const char* dir);
NSP_API nsp_status nsp_runner_set_plot_input(nsp_runner* runner, const char* csv_path);
/* all_pass receives 1 when every verdict passed, 0 otherwise. */
NSP_API nsp_status nsp_runner_run(nsp_runner* runner, const char* subcommand, int* all_pass);
/* Verdict JSON of the last successful run; valid until the next run or destroy. */
NSP_API const char* nsp_runner_last_verdict(const nsp_runner* runner);
NSP_API void nsp_runner_destroy(nsp_runner* runner);

NSP_API size_t nsp_subcommand_count(void);
NSP_API const char* nsp_subcommand_name(size_t index);

#ifdef __cplusplus
}
#endif

#endif
