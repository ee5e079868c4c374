/* fermigas: lattice-lune enumeration, Bogolubov kernel diagnostics,
 * correlation energies and plasmon modes of the mean-field Fermi gas.
 *
 * C interface to the core library.  Handles are opaque; every function
 * returns a status code and leaves a human-readable message retrievable via
 * fg_last_error() on failure.  Strings returned through char** are allocated
 * by the library and must be released with fg_string_free().
 */
#ifndef FERMIGAS_H
#define FERMIGAS_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fg_status {
  FG_OK = 0,
  FG_ERR_INVALID = 1,       /* bad argument or precondition */
  FG_ERR_CONFIG = 2,        /* malformed run configuration */
  FG_ERR_INADMISSIBLE = 3,  /* attractive mode fails the positivity condition */
  FG_ERR_INTERNAL = 4
} fg_status;

typedef struct fg_system fg_system;
typedef struct fg_lune fg_lune;
typedef struct fg_bundle fg_bundle;

const char* fg_version(void);
const char* fg_last_error(void);
void fg_string_free(char* s);

/* ---- systems (JSON: the "system" object of a run config) ---- */
fg_status fg_system_create(const char* json, fg_system** out);
void fg_system_free(fg_system* sys);

/* ---- lattice ---- */
fg_status fg_lune_create(int64_t kf2, const int k[3], fg_lune** out);
void fg_lune_free(fg_lune* lune);
int64_t fg_lune_size(const fg_lune* lune);
fg_status fg_lune_lambda_range(const fg_lune* lune, double* min_out, double* max_out);
fg_status fg_ball_size(int64_t kf2, int64_t* out);

/* ---- riemann ---- */
fg_status fg_power_sum(const fg_lune* lune, double beta, double* out);
fg_status fg_continuum_integral(double kf, double k_norm, double beta, double* out);

/* ---- one-body kernel ---- */
fg_status fg_bundle_create(const fg_system* sys, const int k[3], fg_bundle** out);
void fg_bundle_free(fg_bundle* b);
fg_status fg_bundle_trace_check(const fg_bundle* b, double* lhs, double* rhs);
fg_status fg_bundle_diag_residual(const fg_bundle* b, double* out);

/* ---- correlation ---- */
fg_status fg_fermi_energy(const fg_system* sys, double* out);
fg_status fg_e_corr_bos(const fg_system* sys, int cutoff, int jobs, double* out);
fg_status fg_e_corr_ex(const fg_system* sys, int cutoff, int jobs, double* out);
fg_status fg_error_scale(const fg_system* sys, int cutoff, double* out);

/* ---- plasmon ---- */
fg_status fg_plasmon_epsilon(const fg_system* sys, const int k[3], double* out);

/* ---- table commands; config is a full run-config JSON document ----
 * The rendered table (CSV or JSON per config "format") is returned in *out.
 */
fg_status fg_cmd_lune(const char* config, char** out);
fg_status fg_cmd_riemann(const char* config, char** out);
fg_status fg_cmd_corr(const char* config, char** out);
fg_status fg_cmd_plasmon(const char* config, char** out);

/* Runs the invariant suites; *report is a JSON document, *all_passed is 1
 * when every suite passed.  Honors config "only", "fault" and "jobs".
 */
fg_status fg_cmd_verify(const char* config, char** report, int* all_passed);

#ifdef __cplusplus
}
#endif

#endif /* FERMIGAS_H */
