/* C API of the WTA-NNLD simulator shared library.
 *
 * Usage: create an experiment handle, optionally layer a config file and
 * individual overrides on top of the built-in defaults, then run commands.
 * All functions return WTA_OK (0) on success; on failure the handle stores a
 * human-readable message retrievable with wta_experiment_error().
 */
#ifndef WTANNLD_H
#define WTANNLD_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
    WTA_OK = 0,
    WTA_ERR_PARAM = 1,       /* invalid parameter or configuration value */
    WTA_ERR_IO = 2,          /* file system failure */
    WTA_ERR_FORMAT = 3,      /* malformed config, pattern, or snapshot file */
    WTA_ERR_CALIBRATION = 4, /* parameter auto-tuning cannot proceed */
    WTA_ERR_INTEGRITY = 5,   /* internal consistency violation (wiring, snapshot) */
    WTA_ERR_SIM = 6,         /* numerical divergence during simulation */
    WTA_ERR_INTERNAL = 7
} wta_status;

typedef struct wta_experiment wta_experiment;

const char* wta_version(void);

/* config_json may be NULL (defaults only) or a JSON document merged over the
 * defaults. Returns NULL only on allocation failure. */
wta_experiment* wta_experiment_create(const char* config_json);
void wta_experiment_destroy(wta_experiment* exp);

/* Message of the most recent failed call on this handle, or "". */
const char* wta_experiment_error(const wta_experiment* exp);

/* Merge a JSON config file over the current configuration. */
wta_status wta_experiment_load_config(wta_experiment* exp, const char* path);

/* Set one value by dotted key, e.g. ("stimulus.C", "6") or ("seed", "42").
 * value is parsed as JSON; non-JSON text is taken as a literal string. */
wta_status wta_experiment_set(wta_experiment* exp, const char* dotted_key, const char* value);

/* Resolved configuration as a JSON document; free with wta_string_free. */
char* wta_experiment_config_json(const wta_experiment* exp);

/* command: "gen" | "tune" | "train" | "sweep" | "mismatch".
 * Outputs (CSV files, JSON snapshots, config echo) land in out_dir. */
wta_status wta_experiment_run(wta_experiment* exp, const char* command, const char* out_dir);

/* Probe-only evaluation of a trained wiring snapshot against a pattern file. */
wta_status wta_experiment_eval(wta_experiment* exp, const char* snapshot_path,
                               const char* patterns_path, const char* out_dir);

/* Runs auto-tuning and returns the TuneResult JSON; NULL on failure (check
 * wta_experiment_error). Free with wta_string_free. */
char* wta_experiment_tune_json(wta_experiment* exp);

void wta_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* WTANNLD_H */
