/* Copyright 2026 The mnns Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to libmnns. Handles are opaque; every call that can fail
 * returns an mnns_status and leaves a message for mnns_last_error() on the
 * calling thread. Strings handed out by the library are released with
 * mnns_string_free.
 */
#ifndef MNNS_MNNS_H
#define MNNS_MNNS_H

#include <stddef.h>
#include <stdint.h>

#if defined(MNNS_BUILDING_LIBRARY)
#define MNNS_API __attribute__((visibility("default")))
#else
#define MNNS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mnns_status {
  MNNS_OK = 0,
  MNNS_E_INVALID_ARGUMENT = 1,
  MNNS_E_DIMENSION_MISMATCH = 2,
  MNNS_E_DOMAIN_ESCAPE = 3,
  MNNS_E_HYPOTHESIS = 4,
  MNNS_E_CONVERGENCE = 5,
  MNNS_E_IO = 6,
  MNNS_E_CONFIG = 7,
  MNNS_E_INTERNAL = 8
} mnns_status;

typedef struct mnns_config mnns_config;
typedef struct mnns_report mnns_report;

MNNS_API const char* mnns_version(void);
/* Message of the last failed call on this thread; "" if none. */
MNNS_API const char* mnns_last_error(void);
MNNS_API void mnns_string_free(char* s);

/* Caps the worker pool; 0 restores the default (MNNS_THREADS or the core count). */
MNNS_API void mnns_set_threads(size_t n);

MNNS_API size_t mnns_preset_count(void);
/* NULL when i is out of range. The string is static. */
MNNS_API const char* mnns_preset_name(size_t i);

MNNS_API mnns_status mnns_config_preset(const char* name, mnns_config** out);
MNNS_API mnns_status mnns_config_parse(const char* toml_text, mnns_config** out);
MNNS_API mnns_status mnns_config_load(const char* path, mnns_config** out);
MNNS_API void mnns_config_free(mnns_config* cfg);
MNNS_API mnns_status mnns_config_set_seed(mnns_config* cfg, uint64_t seed);
MNNS_API mnns_status mnns_config_set_output(mnns_config* cfg, const char* dir);
MNNS_API mnns_status mnns_config_output(const mnns_config* cfg, char** out);
MNNS_API mnns_status mnns_config_to_toml(const mnns_config* cfg, char** out);
MNNS_API mnns_status mnns_config_validate(const mnns_config* cfg);

/* Runs the suite and writes report.json and report.csv into out_dir.
 * Returns the process exit code: 0 pass, 1 numerical failure, 2 config
 * error. If log is not NULL it receives a human-readable summary. */
MNNS_API int mnns_run(const mnns_config* cfg, const char* out_dir, char** log);

/* Runs the suite in memory. */
MNNS_API mnns_status mnns_run_suite(const mnns_config* cfg, mnns_report** out);
MNNS_API void mnns_report_free(mnns_report* r);
MNNS_API int mnns_report_passed(const mnns_report* r);
MNNS_API size_t mnns_report_case_count(const mnns_report* r);
MNNS_API mnns_status mnns_report_json(const mnns_report* r, char** out);
MNNS_API mnns_status mnns_report_csv(const mnns_report* r, char** out);

/* Mixed norm of samples on the truncated vertex grid x_i = -L_k + i h_k,
 * h_k = 2 L_k / counts[k], axis 1 fastest. Exponents may be INFINITY. */
MNNS_API mnns_status mnns_mixed_norm(const double* samples, size_t dims, const size_t* counts,
                                     const double* half_widths, const double* p, double* out);

#ifdef __cplusplus
}
#endif

#endif /* MNNS_MNNS_H */
