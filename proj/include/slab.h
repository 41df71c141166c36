/* slab — lattice Schrödinger propagation and multiscale decomposition on the
 * square torus, behind a C ABI.
 *
 * Conventions: the torus is (R/2piZ)^d with normalized Haar measure; fields
 * are sparse complex Fourier coefficients on integer lattice points; the
 * propagator is S f(x,t) = eta(delta t) sum_k fhat(k) beta(k/lambda)
 * e^{i(x.k + t|k|^2/lambda)} over the window [0, delta^{-1}].
 *
 * All functions returning slab_status set a thread-local message retrievable
 * via slab_last_error(). Handles are opaque; every *_create has a matching
 * *_free, and freeing NULL is a no-op.
 */
#ifndef SLAB_H
#define SLAB_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum slab_status {
  SLAB_OK = 0,
  SLAB_ERR_INVARIANT = 1, /* a numerical contract or invariant failed */
  SLAB_ERR_CONFIG = 2,    /* bad argument or configuration */
  SLAB_ERR_IO = 3         /* file system failure */
} slab_status;

typedef struct slab_params slab_params;
typedef struct slab_field slab_field;
typedef struct slab_grid slab_grid;
typedef struct slab_spacetime slab_spacetime;

const char* slab_version(void);
const char* slab_last_error(void);

/* Worker threads for propagation and reductions; results are bit-identical
 * for every setting. */
void slab_set_threads(int k);

/* ----- parameter bundles: delta = 2^{-m K}, lambda a power of two ----- */
slab_status slab_params_create(int n, int64_t lambda, int m, int K,
                               double epsilon, slab_params** out);
void slab_params_free(slab_params* p);
int slab_params_n(const slab_params* p);
int slab_params_d(const slab_params* p);
int64_t slab_params_lambda(const slab_params* p);
int slab_params_levels(const slab_params* p); /* K */
double slab_params_delta(const slab_params* p);
double slab_params_delta_k(const slab_params* p);
double slab_params_qc(const slab_params* p);

/* ----- smooth cutoffs ----- */
typedef enum slab_bump_kind {
  SLAB_BUMP_PHI = 0,
  SLAB_BUMP_ETA = 1,
  SLAB_BUMP_CHI = 2
} slab_bump_kind;

double slab_bump_eval(slab_bump_kind kind, double x);
double slab_beta_eval(const double* xi, int d, double lambda);
slab_status slab_chi_cube_eval(const slab_params* p, int level, int64_t cube,
                               const double* xi, double* out);

/* ----- frequency-cube ladder ----- */
slab_status slab_ladder_cube_count(const slab_params* p, int level, int64_t* out);
/* center: d entries; side in lattice units. */
slab_status slab_ladder_cube_geometry(const slab_params* p, int level, int64_t cube,
                                      int64_t* center, int64_t* side);
slab_status slab_ladder_owner_of(const slab_params* p, int level,
                                 const int64_t* point, int64_t* cube_out);
slab_status slab_separated_pair_count(const slab_params* p, int level, int64_t* out);

/* ----- lattice fields ----- */
/* points: npoints * d lattice coordinates, row-major. */
slab_status slab_field_create(const slab_params* p, int64_t npoints,
                              const int64_t* points, const double* re,
                              const double* im, slab_field** out);
/* spec_json: {"kind": "...", "count": N, ...}; returns count handles. */
slab_status slab_field_ensemble(const slab_params* p, const char* spec_json,
                                uint64_t seed, slab_field*** out_fields,
                                int64_t* out_count);
void slab_field_free(slab_field* f);
void slab_field_list_free(slab_field** fields, int64_t count);
int64_t slab_field_support_size(const slab_field* f);
double slab_field_l2(const slab_field* f);
slab_status slab_field_restrict(const slab_field* f, int level, int64_t cube,
                                slab_field** out);

/* ----- space-time grids and propagation ----- */
slab_status slab_grid_create(const slab_params* p, double oversample,
                             int64_t nx_override, int64_t nt_override,
                             slab_grid** out);
void slab_grid_free(slab_grid* g);
int64_t slab_grid_nx(const slab_grid* g);
int64_t slab_grid_nt(const slab_grid* g);

/* use_fft: 1 = FFT fast path, 0 = direct summation (the oracle route). */
slab_status slab_propagate(const slab_field* f, const slab_grid* g, int use_fft,
                           slab_spacetime** out);
void slab_spacetime_free(slab_spacetime* u);
slab_status slab_spacetime_value(const slab_spacetime* u, int64_t t_index,
                                 const int64_t* x_index, double* re, double* im);

/* xt: npts rows of (x_1..x_d, t). */
slab_status slab_extend_discrete(const slab_field* f, const double* xt,
                                 int64_t npts, double* re, double* im);

/* ----- norms and decomposition ----- */
slab_status slab_spacetime_norm(const slab_spacetime* u, double q, double* out);
slab_status slab_mixed_norm(const slab_spacetime* u, double p, double q, double* out);
slab_status slab_strichartz_quotient(const slab_field* f, const slab_grid* g,
                                     double* out);
slab_status slab_height_split_volume(const slab_spacetime* u, int level, double c0,
                                     double* threshold_out, double* high_fraction_out);
/* Broad/narrow certificate scan over the level-`level` children of f. */
slab_status slab_broad_narrow_scan(const slab_field* f, const slab_grid* g,
                                   int level, int64_t* violations_out,
                                   double* min_slack_out);

/* ----- TT* kernels ----- */
/* cutoff_level < 0 means no cutoff multiplier. */
slab_status slab_kernel_lattice(const slab_params* p, int cutoff_level,
                                int64_t cutoff_cube, const double* x, double t,
                                const double* y, double s, double* re, double* im);
slab_status slab_kernel_envelope(const slab_params* p, int cutoff_level,
                                 double dt_abs, double* out);
slab_status slab_kernel_continuum_1d(const slab_params* p, double dz, double dt,
                                     double tol, double* re, double* im,
                                     double* abs_error_out);
slab_status slab_poisson_compare(const slab_params* p, int cutoff_level,
                                 int64_t cutoff_cube, const double* x, double t,
                                 const double* y, double s, int periodization,
                                 double* rel_error_out, int64_t* nonnegligible_out);

/* ----- experiment drivers (JSON configs, same schema as the CLI) ----- */
/* name: propagate | kernel | decompose | sweep | audit | verify.
 * Output goes to the config's "out" path, or to out_text (caller frees with
 * slab_text_free) when out_text is non-NULL and no path is configured. */
slab_status slab_run(const char* name, const char* config_json, char** out_text);
void slab_text_free(char* text);

/* OLS slope/intercept of log(max quotient) vs log(predictor) over a record
 * CSV produced by the sweep driver. predictor: "lambda" or "delta". */
slab_status slab_fit_scaling_csv(const char* csv_path, const char* predictor,
                                 double* slope, double* intercept);

#ifdef __cplusplus
}
#endif

#endif /* SLAB_H */
