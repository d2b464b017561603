#ifndef STEKLOV_H
#define STEKLOV_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define STEKLOV_API __attribute__((visibility("default")))
#else
#define STEKLOV_API
#endif

/* Every function returning int returns one of these codes. */
typedef enum steklov_status {
    STEKLOV_OK = 0,
    STEKLOV_INVALID_ARGUMENT = 1,
    STEKLOV_RESOLUTION = 2,
    STEKLOV_INDEFINITE_MOMENTS = 3,
    STEKLOV_INVALID_COEFFICIENT = 4,
    STEKLOV_NOT_ORTHONORMAL = 5,
    STEKLOV_NOT_FACTORIZABLE = 6,
    STEKLOV_DEGREE_INSUFFICIENT = 7,
    STEKLOV_BRANCH = 8,
    STEKLOV_CONSTRUCTION_FAILURE = 9,
    STEKLOV_ASSEMBLY_MISMATCH = 10,
    STEKLOV_SYMMETRY = 11,
    STEKLOV_STEP_FAILURE = 12,
    STEKLOV_IO = 13,
    STEKLOV_INTERNAL = 99
} steklov_status;

typedef struct steklov_measure steklov_measure;
typedef struct steklov_construction steklov_construction;
typedef struct steklov_assembled steklov_assembled;

STEKLOV_API const char* steklov_version(void);
STEKLOV_API const char* steklov_status_name(int status);
/* Message of the last failure on the calling thread; empty after success. */
STEKLOV_API const char* steklov_last_error(void);
STEKLOV_API void steklov_string_free(char* s);

/* Measures on the grid theta_k = -pi + 2 pi k / grid; density per radian. */
STEKLOV_API int steklov_measure_lebesgue(size_t grid, steklov_measure** out);
STEKLOV_API int steklov_measure_create(const double* density, size_t grid, const double* angles, const double* masses,
                                       size_t atoms, steklov_measure** out);
STEKLOV_API int steklov_measure_small_delta(int n, double delta, double m, size_t grid, steklov_measure** out);
STEKLOV_API int steklov_measure_total_mass(const steklov_measure* mu, double* out);
STEKLOV_API void steklov_measure_free(steklov_measure* mu);

/* s_0..s_order into re[order + 1], im[order + 1] */
STEKLOV_API int steklov_moments(const steklov_measure* mu, int order, double* re, double* im);
/* gamma_0..gamma_{order - 1} from s_0..s_order */
STEKLOV_API int steklov_verblunsky(const double* s_re, const double* s_im, int order, double* g_re, double* g_im);
/* coefficients of phi_n and phi_n^* (n + 1 each) from gamma_0..gamma_{n - 1} */
STEKLOV_API int steklov_szego(const double* g_re, const double* g_im, int n, double* phi_re, double* phi_im,
                              double* star_re, double* star_im);
/* |phi_n(1)| for the measure scaled to unit mass */
STEKLOV_API int steklov_phi_at_one(const steklov_measure* mu, int n, double* out);
STEKLOV_API int steklov_bounds(int n, double delta, double* bound_sqrt, double* bound_l1);

/* grid = 0 picks the default */
STEKLOV_API int steklov_decoupling_build(int n, double alpha, double rho, double delta1, size_t grid,
                                         steklov_construction** out);
STEKLOV_API int steklov_construction_growth(const steklov_construction* c, double* ratio);
/* JSON bundle; release with steklov_string_free */
STEKLOV_API int steklov_construction_bundle(const steklov_construction* c, char** json);
STEKLOV_API void steklov_construction_free(steklov_construction* c);

/* tail_order = 0 picks the smallest order with negligible tail energy */
STEKLOV_API int steklov_assemble(const steklov_construction* c, int tail_order, int path_b, steklov_assembled** out);
STEKLOV_API size_t steklov_assembled_grid(const steklov_assembled* a);
STEKLOV_API int steklov_assembled_summary(const steklov_assembled* a, double* delta_realized, double* mass,
                                          double* path_agreement);
STEKLOV_API int steklov_assembled_density(const steklov_assembled* a, double* out, size_t grid);
STEKLOV_API void steklov_assembled_free(steklov_assembled* a);

/* Experiment driver. config_json may be NULL. The report is a JSON object with
   command, config, columns, rows, bundle, assertions and passed. */
STEKLOV_API size_t steklov_command_count(void);
STEKLOV_API const char* steklov_command_name(size_t i);
STEKLOV_API int steklov_run(const char* command, const char* config_json, char** report_json);

#ifdef __cplusplus
}
#endif

#endif
