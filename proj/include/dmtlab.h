/* SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The dmtlab Authors
 *
 * C interface to the dmtlab engine. All handles are opaque; every function
 * returns a status code and reports details through dmtlab_last_error().
 */
#ifndef DMTLAB_H
#define DMTLAB_H

#include <stddef.h>

#if defined(DMTLAB_BUILDING_LIBRARY)
#define DMTLAB_API __attribute__((visibility("default")))
#else
#define DMTLAB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dmtlab_status {
  DMTLAB_OK = 0,
  DMTLAB_ERR_INVALID_ARGUMENT = 1,
  DMTLAB_ERR_CONFIG = 2,
  DMTLAB_ERR_CALIBRATION_DEGENERATE = 3,
  DMTLAB_ERR_IO = 4,
  DMTLAB_ERR_INTERNAL = 5
} dmtlab_status;

typedef struct dmtlab_config dmtlab_config;
typedef struct dmtlab_result dmtlab_result;

/* Message for the most recent failure on the calling thread ("" if none). */
DMTLAB_API const char* dmtlab_last_error(void);
DMTLAB_API const char* dmtlab_version(void);

DMTLAB_API dmtlab_status dmtlab_config_create(dmtlab_config** out);
DMTLAB_API void dmtlab_config_destroy(dmtlab_config* cfg);
DMTLAB_API dmtlab_status dmtlab_config_load(dmtlab_config* cfg, const char* path);
DMTLAB_API dmtlab_status dmtlab_config_set(dmtlab_config* cfg, const char* key,
                                           const char* value);

/* command: "dmt", "sim", "exponents", "mac" or "calibrate". On success the
 * result owns the CSV text; a degenerate calibration still returns
 * DMTLAB_OK and sets the result flag. */
DMTLAB_API dmtlab_status dmtlab_run(const dmtlab_config* cfg, const char* command,
                                    dmtlab_result** out);
DMTLAB_API const char* dmtlab_result_csv(const dmtlab_result* res);
DMTLAB_API size_t dmtlab_result_size(const dmtlab_result* res);
DMTLAB_API int dmtlab_result_degenerate(const dmtlab_result* res);
DMTLAB_API void dmtlab_result_destroy(dmtlab_result* res);

/* Analytic tradeoffs. */
DMTLAB_API dmtlab_status dmtlab_g_tradeoff(double r, double p, int m, int n,
                                           double* out);
DMTLAB_API dmtlab_status dmtlab_d_perfect_feedback(double r, int k_levels, int m,
                                                   int n, double* out);
DMTLAB_API dmtlab_status dmtlab_d_constant_power_feedback(double r, int k_levels,
                                                          int m, int n, double* out);
/* q_out may be NULL; otherwise it must hold k_levels doubles. */
DMTLAB_API dmtlab_status dmtlab_d_power_controlled_feedback(double r, int k_levels,
                                                            int m, int n,
                                                            double* out,
                                                            double* q_out);
DMTLAB_API dmtlab_status dmtlab_d_power_controlled_feedback_relaxed(
    double r, int k_levels, int m, int n, double step, double* out);
DMTLAB_API dmtlab_status dmtlab_d_training(double r, int m, int n,
                                           int power_controlled, double* out);
DMTLAB_API dmtlab_status dmtlab_mac_tradeoff(const double* r_vec, int users,
                                             double p, int m, int n, double* out);
DMTLAB_API dmtlab_status dmtlab_mac_main_tradeoff(const double* r_vec, int users,
                                                  int m, int n, double* out);

#ifdef __cplusplus
}
#endif

#endif /* DMTLAB_H */
