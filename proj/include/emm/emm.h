#ifndef EMM_H
#define EMM_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define EMM_API __attribute__((visibility("default")))
#else
#define EMM_API
#endif

typedef enum emm_status {
  EMM_OK = 0,
  EMM_ERROR_CONFIG = 1,
  EMM_ERROR_DOMAIN = 2,
  EMM_ERROR_STRUCTURAL = 3,
  EMM_ERROR_NUMERICAL = 4,
  EMM_ERROR_NO_FEASIBLE = 5,
  EMM_ERROR_MULTI_INTERVAL = 6,
  EMM_ERROR_INTERNAL = 7
} emm_status;

typedef enum emm_verdict {
  EMM_FEASIBLE = 0,
  EMM_INFEASIBLE = 1,
  EMM_UNDETERMINED = 2
} emm_verdict;

typedef enum emm_format { EMM_FORMAT_TABLE = 0, EMM_FORMAT_CSV = 1, EMM_FORMAT_JSON = 2 } emm_format;

/* Run configuration: problem label, parameters, order, window, precision. */
typedef struct emm_config emm_config;
/* A built problem at a fixed order and precision. */
typedef struct emm_problem emm_problem;

EMM_API const char* emm_version(void);

/* Process exit code for a status: 0 ok, 2 configuration or domain,
   3 no feasible energy, 4 disjoint feasible runs, 5 numerical failure. */
EMM_API int emm_exit_code(emm_status status);

/* Message of the last failing call on this thread ("" if none). */
EMM_API const char* emm_last_error(void);

/* Frees strings returned through char** out-parameters. */
EMM_API void emm_string_free(char* s);

/* Newline-separated problem labels. */
EMM_API emm_status emm_problem_labels(char** out);

EMM_API emm_status emm_config_create(emm_config** out);
EMM_API void emm_config_destroy(emm_config* cfg);
/* Keys: problem, I, moments, e-min, e-max, scan-points, tol, bits,
   b-over-a, g, m, eps, L, format, ladder, geometric. */
EMM_API emm_status emm_config_set(emm_config* cfg, const char* key, const char* value);
/* Flat "key = value" file; '#' starts a comment. */
EMM_API emm_status emm_config_load_file(emm_config* cfg, const char* path);
EMM_API emm_status emm_config_format(const emm_config* cfg, emm_format* out);

/* Energy bounds; the report is rendered in the configured format. */
EMM_API emm_status emm_run(const emm_config* cfg, char** report);

/* Lens table rows at uniform order I for each ratio. Failing rows are
   reported in the output and do not fail the call. */
EMM_API emm_status emm_lens_table(const emm_config* cfg, int order, const double* ratios,
                                  size_t count, emm_format format, char** out);

EMM_API emm_status emm_problem_create(const emm_config* cfg, emm_problem** out);
EMM_API void emm_problem_destroy(emm_problem* problem);
/* JSON: label, description, missing-moment count, notes. */
EMM_API emm_status emm_problem_describe(const emm_problem* problem, char** out);
/* One feasibility check at a decimal energy. The optional detail is JSON
   with the verdict, margin and iteration counts. */
EMM_API emm_status emm_check_feasibility(const emm_problem* problem, const char* energy,
                                         emm_verdict* verdict, char** detail);

/* Square-well ground-state moments u(0..rho_max), one decimal per line. */
EMM_API emm_status emm_square_well_oracle(int rho_max, unsigned bits, char** out);
/* Hemisphere ground-state energy k^2 as a decimal. */
EMM_API emm_status emm_hemisphere_oracle(unsigned bits, char** out);

#ifdef __cplusplus
}
#endif

#endif
