#ifndef BERRYLAB_H
#define BERRYLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(BERRYLAB_BUILDING_LIBRARY)
#    define BLAB_API __declspec(dllexport)
#  else
#    define BLAB_API __declspec(dllimport)
#  endif
#else
#  define BLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum blab_status {
  BLAB_OK = 0,
  BLAB_ERR_ARGUMENT = 1,     /* null pointer, bad size, unknown enum value */
  BLAB_ERR_CONFIG = 2,       /* experiment configuration rejected */
  BLAB_ERR_PRECONDITION = 3, /* operation precondition or domain violated */
  BLAB_ERR_NUMERICAL = 4,    /* numerical failure */
  BLAB_ERR_IO = 5,           /* file system or parse failure */
  BLAB_ERR_BUFFER = 6,       /* caller buffer too small; required size reported */
  BLAB_ERR_INTERNAL = 7
} blab_status;

/* Message of the last failing call on this thread ("" if none). */
BLAB_API const char* blab_last_error(void);
BLAB_API const char* blab_status_name(blab_status status);
BLAB_API const char* blab_version(void);
/* CLI exit status for a call status: 0 ok, 1 usage, 2 config, 3 precondition,
   4 numerical, 5 io. */
BLAB_API int blab_exit_code(blab_status status);

/* Strings returned through char** are owned by the caller. */
BLAB_API void blab_string_free(char* s);

/* ---- special functions ---- */
BLAB_API blab_status blab_bessel_j(double nu, double x, double* out);
BLAB_API blab_status blab_bessel_j_zero(double nu, int k, double* out);
BLAB_API blab_status blab_legendre_p(int l, double x, double* out);
/* Real orthonormal harmonic of degree l, 1-based index m, at a unit vector. */
BLAB_API blab_status blab_spherical_harmonic(int l, int m, const double omega[3], double* out);
BLAB_API blab_status blab_berry_kernel(int dimension, double r, double* out);

/* ---- manifolds ---- */
typedef struct blab_manifold blab_manifold;

BLAB_API blab_status blab_manifold_torus(const double* sides, size_t n, int irrational, blab_manifold** out);
BLAB_API blab_status blab_manifold_sphere(blab_manifold** out);
BLAB_API void blab_manifold_free(blab_manifold* m);
BLAB_API int blab_manifold_dimension(const blab_manifold* m);
/* Eigenvalues <= max_lambda with multiplicities. If cap is too small the
   required count is written to *count and BLAB_ERR_BUFFER returned. */
BLAB_API blab_status blab_manifold_eigenvalues(const blab_manifold* m, double max_lambda, double* lambdas,
                                               int* multiplicities, size_t cap, size_t* count);

/* ---- eigenfunctions ---- */
typedef struct blab_eigenfunction blab_eigenfunction;

/* Coefficients over the eigenspace basis; normalize != 0 rescales to ||psi||^2 = Vol. */
BLAB_API blab_status blab_eigenfunction_create(const blab_manifold* m, double lambda, const double* coefficients,
                                               size_t n, int normalize, blab_eigenfunction** out);
/* Gaussian coefficients from the seed, normalized. */
BLAB_API blab_status blab_eigenfunction_random(const blab_manifold* m, double lambda, uint64_t seed,
                                               blab_eigenfunction** out);
BLAB_API void blab_eigenfunction_free(blab_eigenfunction* e);
BLAB_API int blab_eigenfunction_multiplicity(const blab_eigenfunction* e);
BLAB_API blab_status blab_eigenfunction_value(const blab_eigenfunction* e, const double* point, size_t n, double* out);

/* ---- fields on R^d ---- */
typedef struct blab_field blab_field;

typedef enum blab_sampler { BLAB_SAMPLER_PLANE_WAVE = 0, BLAB_SAMPLER_BESSEL_FOURIER = 1 } blab_sampler;

/* Draw `index` of the Berry sampler under the master seed. */
BLAB_API blab_status blab_field_berry(blab_sampler kind, int dimension, int directions, int degree_cap,
                                      uint64_t seed, uint64_t index, blab_field** out);
/* berry_kernel(d, |x|) * scale. */
BLAB_API blab_status blab_field_radial_wave(int dimension, double scale, blab_field** out);
/* phi(y) = psi(Exp_p(y / sqrt(lambda))). */
BLAB_API blab_status blab_field_localize(const blab_eigenfunction* e, const double* base_point, size_t n,
                                         blab_field** out);
BLAB_API void blab_field_free(blab_field* f);
BLAB_API int blab_field_dimension(const blab_field* f);
BLAB_API blab_status blab_field_value(const blab_field* f, const double* y, size_t n, double* out);
/* All partial derivatives of order <= `order` at y, graded order. */
BLAB_API blab_status blab_field_derivatives(const blab_field* f, const double* y, size_t n, int order, double* out,
                                            size_t cap, size_t* count);
BLAB_API blab_status blab_frechet_distance(const blab_field* f, const blab_field* g, int kmax, int nmax,
                                           double spacing, double* distance, double* tail_bound);

/* ---- sampled fields ---- */
typedef struct blab_sampled blab_sampled;

/* Samples on the ball of `radius` (resolution points per axis) up to `order`. */
BLAB_API blab_status blab_sample(const blab_field* f, double radius, int resolution, int order, blab_sampled** out);
BLAB_API void blab_sampled_free(blab_sampled* s);
BLAB_API size_t blab_sampled_node_count(const blab_sampled* s);
BLAB_API size_t blab_sampled_stride(const blab_sampled* s);
/* Row-major [node][derivative] data. */
BLAB_API blab_status blab_sampled_data(const blab_sampled* s, double* out, size_t cap, size_t* count);
BLAB_API blab_status blab_cr_distance(const blab_sampled* a, const blab_sampled* b, int r, double rho, double* out);
BLAB_API blab_status blab_helmholtz_residual(const blab_sampled* s, double* out);
BLAB_API blab_status blab_sampled_to_text(const blab_sampled* s, char** out);
BLAB_API blab_status blab_sampled_from_text(const char* text, blab_sampled** out);

/* ---- experiments ---- */
/* Validation report: first line "ok <hash>" or "invalid", then "notice: ..."
   and "error: ..." lines. Returns BLAB_ERR_CONFIG when invalid. */
BLAB_API blab_status blab_config_validate_text(const char* text, char** report);
BLAB_API blab_status blab_config_validate_file(const char* path, char** report);
BLAB_API blab_status blab_config_hash(const char* text, char** hash);

/* Runs a config. seed_override may be null. out_dir null uses the config's
   output directory; nothing is written on failure. *headline (optional)
   receives a one-line summary, *record (optional) the JSON record. */
BLAB_API blab_status blab_run_text(const char* text, const char* out_dir, const uint64_t* seed_override, int threads,
                                   char** headline, char** record);
BLAB_API blab_status blab_run_file(const char* path, const char* out_dir, const uint64_t* seed_override, int threads,
                                   char** headline, char** record);
/* Record/config consistency. config_path may be null. Report lines are the
   problems found; BLAB_ERR_CONFIG when any. */
BLAB_API blab_status blab_check_outputs(const char* dir, const char* config_path, char** report);
BLAB_API blab_status blab_list_experiments(char** out);

#ifdef __cplusplus
}
#endif

#endif
