/* SPDX-License-Identifier: Apache-2.0 */
/* Copyright 2026 The dmtlab Authors */

#include <math.h>
#include <stdio.h>
#include <string.h>

#include "dmtlab.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, \
              #cond);                                             \
      ++failures;                                                 \
    }                                                             \
  } while (0)

static int near(double a, double b) { return fabs(a - b) < 1e-9; }

int main(void) {
  double d = 0.0;
  double q[3] = {0.0, 0.0, 0.0};
  double rates[2] = {0.0, 0.0};
  dmtlab_config* cfg = NULL;
  dmtlab_result* res = NULL;

  EXPECT(strcmp(dmtlab_version(), "1.0.0") == 0);

  EXPECT(dmtlab_g_tradeoff(0.2, 1.0, 1, 1, &d) == DMTLAB_OK && near(d, 0.8));
  EXPECT(dmtlab_g_tradeoff(0.5, 2.0, 1, 2, &d) == DMTLAB_OK && near(d, 3.0));
  EXPECT(dmtlab_g_tradeoff(0.5, 0.0, 1, 2, &d) == DMTLAB_ERR_INVALID_ARGUMENT);
  EXPECT(strlen(dmtlab_last_error()) > 0);
  EXPECT(dmtlab_g_tradeoff(0.5, 1.0, 1, 2, NULL) == DMTLAB_ERR_INVALID_ARGUMENT);
  EXPECT(dmtlab_d_perfect_feedback(0.0, 3, 1, 2, &d) == DMTLAB_OK && near(d, 14.0));
  EXPECT(dmtlab_d_constant_power_feedback(0.0, 3, 2, 2, &d) == DMTLAB_OK && near(d, 8.0));
  EXPECT(dmtlab_d_power_controlled_feedback(0.0, 3, 1, 1, &d, q) == DMTLAB_OK && near(d, 3.0));
  EXPECT(q[0] == 0.0 && q[1] > 0.0 && q[2] >= q[1]);
  EXPECT(dmtlab_d_power_controlled_feedback(0.0, 3, 1, 1, &d, NULL) == DMTLAB_OK);
  EXPECT(dmtlab_d_power_controlled_feedback_relaxed(0.3, 2, 1, 2, 0.05, &d) == DMTLAB_OK);
  EXPECT(dmtlab_d_training(0.0, 1, 2, 1, &d) == DMTLAB_OK && near(d, 6.0));
  EXPECT(dmtlab_mac_tradeoff(rates, 2, 1.0, 1, 2, &d) == DMTLAB_OK && near(d, 2.0));
  EXPECT(dmtlab_mac_main_tradeoff(rates, 2, 1, 2, &d) == DMTLAB_OK && near(d, 6.0));
  EXPECT(dmtlab_mac_tradeoff(NULL, 2, 1.0, 1, 2, &d) == DMTLAB_ERR_INVALID_ARGUMENT);

  EXPECT(dmtlab_config_create(&cfg) == DMTLAB_OK && cfg != NULL);
  EXPECT(dmtlab_config_set(cfg, "no_such_key", "1") == DMTLAB_ERR_CONFIG);
  EXPECT(dmtlab_config_load(cfg, "/nonexistent/dmtlab.cfg") == DMTLAB_ERR_IO);
  EXPECT(dmtlab_config_set(cfg, "r_list", "0,0.2") == DMTLAB_OK);
  EXPECT(dmtlab_run(cfg, "dmt", &res) == DMTLAB_OK && res != NULL);
  if (res) {
    EXPECT(strncmp(dmtlab_result_csv(res), "r,scenario,diversity\n", 21) == 0);
    EXPECT(dmtlab_result_size(res) == strlen(dmtlab_result_csv(res)));
    EXPECT(strstr(dmtlab_result_csv(res), "0.2,no_feedback,0.8\n") != NULL);
    EXPECT(dmtlab_result_degenerate(res) == 0);
    dmtlab_result_destroy(res);
    res = NULL;
  }
  EXPECT(dmtlab_run(cfg, "plot", &res) == DMTLAB_ERR_CONFIG);
  EXPECT(dmtlab_config_set(cfg, "trials", "0") == DMTLAB_OK);
  EXPECT(dmtlab_run(cfg, "sim", &res) == DMTLAB_ERR_CONFIG);
  EXPECT(res == NULL);
  dmtlab_config_destroy(cfg);
  dmtlab_config_destroy(NULL);
  dmtlab_result_destroy(NULL);

  if (failures == 0) printf("c api: all checks passed\n");
  return failures == 0 ? 0 : 1;
}
