/* Plain C consumer of the shared library. */
#include <math.h>
#include <stdio.h>

#include "cranest/cranest.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond);  \
      ++failures;                                                 \
    }                                                             \
  } while (0)

int main(void) {
  cranest_scenario spec;
  cranest_instance* inst = NULL;
  cranest_matrix *a = NULL, *b = NULL, *x = NULL;
  cranest_layout lay;
  cranest_solver_config cfg;
  cranest_report* rep = NULL;
  double a1 = 0, a2 = 0, stat = 0, dual = 0, kkt = 0;

  cranest_scenario_defaults(&spec);
  spec.layout.users = 20;
  spec.layout.rrhs = 4;
  spec.layout.rrh_antennas = 2;
  spec.layout.user_antennas = 1;
  spec.layout.pilot_length = 12;
  spec.active_count = 3;
  spec.seed = 11;

  EXPECT(cranest_instance_generate(&spec, &inst) == CRANEST_OK);
  EXPECT(cranest_instance_layout(inst, &lay) == CRANEST_OK);
  EXPECT(cranest_instance_a(inst, &a) == CRANEST_OK);
  EXPECT(cranest_instance_b(inst, &b) == CRANEST_OK);
  EXPECT(cranest_tuning_bounds(a, b, NULL, &lay, &a1, &a2) == CRANEST_OK);
  cranest_solver_config_defaults(&cfg);
  EXPECT(cranest_preset_regularization(CRANEST_PRESET_FULL, a1, a2, 0.03, &cfg.reg) == CRANEST_OK);
  EXPECT(cranest_solve(a, b, &lay, &cfg, &rep) == CRANEST_OK);
  EXPECT(cranest_report_pass_count(rep) == 2);
  EXPECT(cranest_report_x_hat(rep, &x) == CRANEST_OK);
  EXPECT(cranest_matrix_rows(x) == 20 && cranest_matrix_cols(x) == 8);
  EXPECT(cranest_kkt_residual(x, a, b, NULL, &lay, &cfg.reg, &stat, &dual, &kkt) == CRANEST_OK);
  EXPECT(isfinite(kkt));
  EXPECT(cranest_solve(a, b, &lay, NULL, &rep) == CRANEST_ERR_NULL_ARGUMENT);

  cranest_matrix_free(x);
  cranest_report_free(rep);
  cranest_matrix_free(a);
  cranest_matrix_free(b);
  cranest_instance_free(inst);
  cranest_matrix_free(NULL);

  if (failures) {
    fprintf(stderr, "%d failure(s)\n", failures);
    return 1;
  }
  printf("c api smoke test passed\n");
  return 0;
}
