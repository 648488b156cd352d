/* C interface of the wavesim library. All strings are UTF-8 and NUL terminated.
 * Strings and arrays returned through out-parameters are owned by the caller and
 * must be released with wavesim_string_free / wavesim_doubles_free. */
#ifndef WAVESIM_WAVESIM_H
#define WAVESIM_WAVESIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(WAVESIM_BUILDING_LIBRARY)
#    define WAVESIM_API __declspec(dllexport)
#  else
#    define WAVESIM_API __declspec(dllimport)
#  endif
#else
#  define WAVESIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wavesim_status {
  WAVESIM_OK = 0,
  WAVESIM_INVALID_ARGUMENT = 1,
  WAVESIM_SCHEMA = 2, /* malformed input file */
  WAVESIM_DATA = 3,   /* well-formed input that cannot be processed */
  WAVESIM_UNDEFINED = 4,
  WAVESIM_IO = 5,
  WAVESIM_INTERNAL = 6
} wavesim_status;

typedef struct wavesim_scenario wavesim_scenario;
typedef struct wavesim_run wavesim_run;
typedef struct wavesim_log wavesim_log;
typedef struct wavesim_params wavesim_params;

WAVESIM_API const char* wavesim_version(void);
/* Message of the last failed call on this thread; empty if none. */
WAVESIM_API const char* wavesim_last_error(void);
WAVESIM_API const char* wavesim_status_name(wavesim_status status);
WAVESIM_API void wavesim_string_free(char* s);
WAVESIM_API void wavesim_doubles_free(double* values);

/* Scenarios */
WAVESIM_API wavesim_status wavesim_scenario_parse(const char* text, wavesim_scenario** out);
WAVESIM_API wavesim_status wavesim_scenario_template(const char* name, wavesim_scenario** out);
/* Newline separated list of template names. */
WAVESIM_API wavesim_status wavesim_template_names(char** out);
WAVESIM_API wavesim_status wavesim_scenario_set_seed(wavesim_scenario* scenario, uint64_t seed);
WAVESIM_API wavesim_status wavesim_scenario_seed(const wavesim_scenario* scenario, uint64_t* seed);
WAVESIM_API wavesim_status wavesim_scenario_to_config(const wavesim_scenario* scenario, char** out);
WAVESIM_API void wavesim_scenario_free(wavesim_scenario* scenario);

/* Simulation */
WAVESIM_API wavesim_status wavesim_simulate(const wavesim_scenario* scenario, wavesim_run** out);
/* Runs n independent scenarios on up to `jobs` threads; out_runs receives n handles. */
WAVESIM_API wavesim_status wavesim_simulate_batch(const wavesim_scenario* const* scenarios, size_t n,
                                                  unsigned jobs, wavesim_run** out_runs);
WAVESIM_API wavesim_status wavesim_run_log_csv(const wavesim_run* run, char** out);
WAVESIM_API wavesim_status wavesim_run_events_json(const wavesim_run* run, char** out);
WAVESIM_API wavesim_status wavesim_run_log(const wavesim_run* run, wavesim_log** out);
WAVESIM_API void wavesim_run_free(wavesim_run* run);

/* Analysis parameters (safety envelope and energy model) */
WAVESIM_API wavesim_status wavesim_params_default(wavesim_params** out);
WAVESIM_API wavesim_status wavesim_params_parse(const char* text, wavesim_params** out);
WAVESIM_API void wavesim_params_free(wavesim_params* params);

/* Trajectory logs */
WAVESIM_API wavesim_status wavesim_log_parse(const char* csv, double loop_length,
                                             double vehicle_length, wavesim_log** out);
WAVESIM_API wavesim_status wavesim_log_vehicle_count(const wavesim_log* log, size_t* count);
WAVESIM_API void wavesim_log_free(wavesim_log* log);

/* Metrics summary as JSON and CSV. */
WAVESIM_API wavesim_status wavesim_analyze(const wavesim_log* log, const wavesim_params* params,
                                           const char* label, char** json, char** csv);

/* Paired comparison of metrics summaries. Each side is a list of (group name, metrics JSON).
 * variables: comma separated metric names. vehicles: comma separated ids or NULL for all.
 * warnings receives newline separated messages (possibly empty). */
WAVESIM_API wavesim_status wavesim_compare(const char* const* pre_names, const char* const* pre_json,
                                           size_t n_pre, const char* const* post_names,
                                           const char* const* post_json, size_t n_post,
                                           const char* variables, const char* vehicles,
                                           char** text, char** csv, char** warnings);

/* Six-panel report for one vehicle as JSON and SVG. */
WAVESIM_API wavesim_status wavesim_ecd(const wavesim_log* log, const char* vehicle,
                                       const wavesim_params* params, size_t n_virtual, char** json,
                                       char** svg);

/* Feasible constant speeds through a signal plan given as config text. */
WAVESIM_API wavesim_status wavesim_greenwave(const char* signals, double v_min, double v_max,
                                             double start_s, double start_t, double resolution,
                                             double** speeds, size_t* count);

#ifdef __cplusplus
}
#endif

#endif
