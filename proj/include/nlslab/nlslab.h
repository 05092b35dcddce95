/* C interface to the radial NLS simulator. Every call returns a status; on failure the
 * message is available from nlslab_last_error() on the calling thread. Strings returned
 * through char** are owned by the caller and released with nlslab_string_free. */
#ifndef NLSLAB_H
#define NLSLAB_H

#include <stddef.h>

#if defined(NLSLAB_BUILDING)
#define NLSLAB_API __attribute__((visibility("default")))
#else
#define NLSLAB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
    NLSLAB_OK = 0,
    NLSLAB_ERR_CONFIG = 1,
    NLSLAB_ERR_REGIME = 2,
    NLSLAB_ERR_DIMENSION = 3,
    NLSLAB_ERR_NUMERICAL = 4,
    NLSLAB_ERR_IO = 5,
    NLSLAB_ERR_ARGUMENT = 6,
    NLSLAB_ERR_INTERNAL = 7
} nlslab_status;

typedef struct nlslab_config nlslab_config;
typedef struct nlslab_cache nlslab_cache;
typedef struct nlslab_field nlslab_field;

NLSLAB_API const char* nlslab_version(void);
NLSLAB_API const char* nlslab_last_error(void);
NLSLAB_API const char* nlslab_status_name(nlslab_status s);
/* 0 ok, 1 config/regime/io/argument, 2 numerical/internal */
NLSLAB_API int nlslab_exit_code(nlslab_status s);
NLSLAB_API void nlslab_string_free(char* s);

/* Warnings from numerical routines; NULL restores stderr. */
typedef void (*nlslab_warning_fn)(const char* message, void* user);
NLSLAB_API void nlslab_set_warning_handler(nlslab_warning_fn fn, void* user);

NLSLAB_API nlslab_status nlslab_config_default(nlslab_config** out);
NLSLAB_API nlslab_status nlslab_config_load(const char* path, nlslab_config** out);
NLSLAB_API nlslab_status nlslab_config_parse(const char* text, nlslab_config** out);
NLSLAB_API nlslab_status nlslab_config_set(nlslab_config* cfg, const char* key, const char* value);
NLSLAB_API nlslab_status nlslab_config_check(const nlslab_config* cfg);
NLSLAB_API nlslab_status nlslab_config_to_json(const nlslab_config* cfg, char** json_out);
NLSLAB_API void nlslab_config_free(nlslab_config* cfg);

/* dir == NULL: NLSLAB_CACHE, then the XDG/HOME defaults. */
NLSLAB_API nlslab_status nlslab_cache_open(const char* dir, nlslab_cache** out);
NLSLAB_API const char* nlslab_cache_dir(const nlslab_cache* cache);
NLSLAB_API void nlslab_cache_free(nlslab_cache* cache);

/* json_out and main_theorem_ok may be NULL. */
NLSLAB_API nlslab_status nlslab_regime(int d, double a, double alpha, int mu, char** json_out, int* main_theorem_ok);
/* out_dir may be NULL; otherwise Q.csv/Q.json are written there. */
NLSLAB_API nlslab_status nlslab_groundstate(const nlslab_config* cfg, nlslab_cache* cache, const char* out_dir,
                                            char** json_out);
NLSLAB_API nlslab_status nlslab_classify(const nlslab_config* cfg, nlslab_cache* cache, char** json_out);
NLSLAB_API nlslab_status nlslab_run(const nlslab_config* cfg, nlslab_cache* cache, char** manifest_out);
/* parameter == NULL takes the axis from the config's [sweep] section. The returned JSON is an
 * array of manifests; failed runs carry "ok": false and the call still returns NLSLAB_OK. */
NLSLAB_API nlslab_status nlslab_sweep(const nlslab_config* cfg, nlslab_cache* cache, const char* parameter,
                                      const char* const* values, size_t n_values, int jobs, char** json_out);
NLSLAB_API nlslab_status nlslab_report(const char* run_dir, char** path_out);

NLSLAB_API nlslab_status nlslab_field_read(const char* csv_path, nlslab_field** out);
NLSLAB_API nlslab_status nlslab_field_write(const nlslab_field* f, const char* csv_path);
NLSLAB_API size_t nlslab_field_size(const nlslab_field* f);
NLSLAB_API int nlslab_field_dimension(const nlslab_field* f);
/* Each output array holds nlslab_field_size() doubles; any of them may be NULL. */
NLSLAB_API nlslab_status nlslab_field_values(const nlslab_field* f, double* r, double* re, double* im);
NLSLAB_API void nlslab_field_free(nlslab_field* f);

#ifdef __cplusplus
}
#endif

#endif
