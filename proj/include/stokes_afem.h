/* C interface of the adaptive Stokes eigenvalue solver.
 *
 * All functions are thread-compatible: distinct handles may be used from
 * distinct threads. The message behind the most recent failure on the calling
 * thread is available from stokes_afem_last_error().
 */
#ifndef STOKES_AFEM_H
#define STOKES_AFEM_H

#include <stddef.h>

#if defined(_WIN32)
#define STOKES_AFEM_API __declspec(dllexport)
#else
#define STOKES_AFEM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum stokes_afem_status {
  STOKES_AFEM_OK = 0,
  STOKES_AFEM_ERR_INVALID_ARGUMENT = 1,
  STOKES_AFEM_ERR_CONFIG = 2,
  STOKES_AFEM_ERR_MESH = 3,
  STOKES_AFEM_ERR_QUADRATURE = 4,
  STOKES_AFEM_ERR_SOLVER = 5,
  STOKES_AFEM_ERR_IO = 6,
  STOKES_AFEM_ERR_INTERNAL = 7
} stokes_afem_status;

typedef enum stokes_afem_log_level {
  STOKES_AFEM_LOG_INFO = 0,
  STOKES_AFEM_LOG_WARNING = 1
} stokes_afem_log_level;

typedef struct stokes_afem_config stokes_afem_config;
typedef struct stokes_afem_result stokes_afem_result;

/* Receives one line per solved level. message is valid during the call only. */
typedef void (*stokes_afem_log_fn)(stokes_afem_log_level level, const char* message,
                                   void* user_data);

typedef struct stokes_afem_level {
  int level;
  long dofs;
  int elements;
  double lambda1;
  double eta2;
  /* |lambda1 - reference|, NaN when the domain has no reference value. */
  double err_vs_ref;
  double seconds;
  int marked;
  /* Distance of the element with the largest indicator to the re-entrant
   * corner or slit tip (negative without one), and that element's diameter. */
  double max_eta_distance;
  double max_eta_diameter;
} stokes_afem_level;

typedef struct stokes_afem_source_level {
  int level;
  int n;
  double h;
  long dofs;
  double err_dg;
  double err_l2;
  double err_p;
  double seconds;
} stokes_afem_source_level;

STOKES_AFEM_API const char* stokes_afem_version(void);
STOKES_AFEM_API const char* stokes_afem_status_name(stokes_afem_status status);
/* Empty string when the calling thread has seen no failure. */
STOKES_AFEM_API const char* stokes_afem_last_error(void);
/* Help text for the run options. */
STOKES_AFEM_API const char* stokes_afem_usage(void);

/* Configuration with every default. */
STOKES_AFEM_API stokes_afem_status stokes_afem_config_create(stokes_afem_config** out);
STOKES_AFEM_API void stokes_afem_config_destroy(stokes_afem_config* config);
/* Replace the configuration by defaults, then --config FILE, then flags.
 * argv holds the options only (no program or subcommand name). On failure
 * the configuration is left unchanged. */
STOKES_AFEM_API stokes_afem_status stokes_afem_config_parse_args(stokes_afem_config* config,
                                                                 int argc,
                                                                 const char* const* argv);
/* Apply a key=value or JSON file on top of the current values. */
STOKES_AFEM_API stokes_afem_status stokes_afem_config_load_file(stokes_afem_config* config,
                                                                const char* path);
STOKES_AFEM_API stokes_afem_status stokes_afem_config_set(stokes_afem_config* config,
                                                          const char* key, const char* value);
/* Copies the value with its terminating NUL into buffer when it fits.
 * *required (if non-NULL) receives the size needed including the NUL. */
STOKES_AFEM_API stokes_afem_status stokes_afem_config_get(const stokes_afem_config* config,
                                                          const char* key, char* buffer,
                                                          size_t size, size_t* required);

/* Run one experiment. The artifacts of completed levels stay on disk when a
 * later level fails; *out is only set on success. */
STOKES_AFEM_API stokes_afem_status stokes_afem_run(const stokes_afem_config* config,
                                                   stokes_afem_log_fn log, void* user_data,
                                                   stokes_afem_result** out);
STOKES_AFEM_API void stokes_afem_result_destroy(stokes_afem_result* result);
STOKES_AFEM_API size_t stokes_afem_result_level_count(const stokes_afem_result* result);
STOKES_AFEM_API stokes_afem_status stokes_afem_result_level(const stokes_afem_result* result,
                                                            size_t index,
                                                            stokes_afem_level* out);
STOKES_AFEM_API size_t stokes_afem_result_source_count(const stokes_afem_result* result);
STOKES_AFEM_API stokes_afem_status stokes_afem_result_source_level(
    const stokes_afem_result* result, size_t index, stokes_afem_source_level* out);
/* "max-dof", "eta-tol", "estimator-zero", "max-levels" or "completed". */
STOKES_AFEM_API const char* stokes_afem_result_termination(const stokes_afem_result* result);
STOKES_AFEM_API const char* stokes_afem_result_output_dir(const stokes_afem_result* result);

#ifdef __cplusplus
}
#endif

#endif
