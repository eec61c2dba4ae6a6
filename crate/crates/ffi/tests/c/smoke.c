#include <math.h>
#include <stdio.h>
#include <string.h>

#include "pexider.h"

#define CHECK(cond)                                                    \
  do {                                                                 \
    if (!(cond)) {                                                     \
      fprintf(stderr, "line %d: %s failed\n", __LINE__, #cond);        \
      return 1;                                                        \
    }                                                                  \
  } while (0)

int main(void) {
  PkSolution *s = NULL;
  CHECK(pk_solution_paper_example(&s) == PK_STATUS_OK);

  double v = 0.0;
  CHECK(pk_solution_eval(s, PK_COMPONENT_BIG_F, 2.0, &v) == PK_STATUS_OK && v == 8.0);
  CHECK(pk_solution_eval(s, PK_COMPONENT_BIG_G, 4.25, &v) == PK_STATUS_OK && v == 12.75);
  CHECK(pk_solution_deriv(s, PK_COMPONENT_G1, 3.0, &v) == PK_STATUS_OK && v == 1.5);

  PkResidual r;
  CHECK(pk_solution_residual(s, 50, 1e-3, &r) == PK_STATUS_OK);
  CHECK(r.max_abs < 1e-12 && r.samples == 2500);

  PkVerdict verdict;
  double windows[4];
  size_t count = 0;
  CHECK(pk_solution_classify(s, 1e-6, 4096, &verdict, windows, 2, &count) == PK_STATUS_OK);
  CHECK(verdict == PK_VERDICT_PARTIALLY_AFFINE && count == 1);
  CHECK(fabs(windows[0] - 1.0) < 0.02 && windows[1] == 4.0);

  CHECK(pk_solution_eval(s, PK_COMPONENT_BIG_G, 20.0, &v) == PK_STATUS_DOMAIN);
  CHECK(pk_last_error_message() != NULL && strlen(pk_last_error_message()) > 0);

  char *json = NULL;
  CHECK(pk_solution_to_json(s, &json) == PK_STATUS_OK);
  PkSolution *copy = NULL;
  CHECK(pk_solution_from_json(json, &copy) == PK_STATUS_OK);
  CHECK(pk_solution_eval(copy, PK_COMPONENT_F1, 3.0, &v) == PK_STATUS_OK && v == 3.75);
  pk_string_free(json);
  pk_solution_free(copy);
  pk_solution_free(s);

  printf("ok %s\n", pk_version());
  return 0;
}
