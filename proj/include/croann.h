/* croann: training of single-hidden-layer feedforward classifiers by
 * chemical reaction optimization, plus a UCI benchmark harness.
 *
 * C API of the shared library. Handles are opaque; every call that can fail
 * returns a croann_status, with a thread-local message available from
 * croann_last_error().
 */
#ifndef CROANN_H
#define CROANN_H

#include <stddef.h>

#if defined(_WIN32)
#define CROANN_API __declspec(dllexport)
#else
#define CROANN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum croann_status {
    CROANN_OK = 0,
    CROANN_ERR_INVALID_ARGUMENT = 1, /* bad handle, null pointer, unknown key */
    CROANN_ERR_CONFIG = 2,           /* malformed config text or out-of-range value */
    CROANN_ERR_IO = 3,               /* missing or unreadable/unwritable file */
    CROANN_ERR_DATA = 4,             /* malformed dataset, checksum mismatch, bad split */
    CROANN_ERR_INTERNAL = 5
} croann_status;

/* Opaque run configuration (dataset location, network size, search
 * parameters, stopping rule, trial count and seed). */
typedef struct croann_config croann_config;

CROANN_API const char* croann_version(void);
CROANN_API const char* croann_status_name(croann_status status);

/* Message for the most recent failing call on this thread; empty string if
 * the last call succeeded. The pointer stays valid until the next API call
 * on the same thread. */
CROANN_API const char* croann_last_error(void);

/* Loads a key=value config file. Environment variables with the CROANN_
 * prefix override file values (key a.b_c reads CROANN_A_B_C). The handle
 * must be released with croann_config_free. */
CROANN_API croann_status croann_config_load(const char* path, croann_config** out);

/* Same, from in-memory text. */
CROANN_API croann_status croann_config_parse(const char* text, croann_config** out);

/* Replaces the value of one config key; range checks re-run. */
CROANN_API croann_status croann_config_set(croann_config* config, const char* key,
                                           const char* value);

/* Copies the textual value of a key into buffer (NUL-terminated). Fails with
 * CROANN_ERR_INVALID_ARGUMENT if the buffer is too small or the key is
 * unknown. */
CROANN_API croann_status croann_config_get(const croann_config* config, const char* key,
                                           char* buffer, size_t buffer_size);

CROANN_API void croann_config_free(croann_config* config);

/* Runs the configured trials and writes manifest.txt, trials.csv and
 * summary.csv into out_dir (created if needed). jobs <= 0 means one worker
 * per hardware thread. */
CROANN_API croann_status croann_train(const croann_config* config, const char* out_dir,
                                      int jobs);

/* Re-runs the trials once per value of one search parameter, writing
 * sweep.csv and manifest.txt into out_dir. values are textual config values
 * and are echoed verbatim into the CSV. */
CROANN_API croann_status croann_sweep(const croann_config* config, const char* parameter,
                                      const char* const* values, size_t n_values,
                                      const char* out_dir, int jobs);

/* Renders a markdown comparison table over every run found in run_dir,
 * writes run_dir/report.md, and hands the text back as a heap string the
 * caller releases with croann_string_free. */
CROANN_API croann_status croann_report(const char* run_dir, char** out_markdown);

CROANN_API void croann_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* CROANN_H */
