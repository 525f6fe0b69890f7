#include <stdio.h>
#include <string.h>

#include "matrep.h"

#define CHECK(cond)                                              \
  do {                                                           \
    if (!(cond)) {                                               \
      fprintf(stderr, "%s:%d: check failed: %s\n", __FILE__,     \
              __LINE__, #cond);                                  \
      return 1;                                                  \
    }                                                            \
  } while (0)

int main(void) {
  MatrepMatroid *u24 = NULL;
  CHECK(matrep_matroid_uniform(2, 4, &u24) == MATREP_STATUS_OK);

  MatrepField *gf2 = NULL, *gf3 = NULL;
  CHECK(matrep_field_new(2, &gf2) == MATREP_STATUS_OK);
  CHECK(matrep_field_new(3, &gf3) == MATREP_STATUS_OK);

  MatrepRepOutcome outcome;
  uint8_t matrix[8];
  CHECK(matrep_find_representation(u24, gf2, 0, false, &outcome, matrix,
                                   sizeof matrix, NULL) == MATREP_STATUS_OK);
  CHECK(outcome == MATREP_REP_OUTCOME_NOT_REPRESENTABLE);
  CHECK(matrep_find_representation(u24, gf3, 0, false, &outcome, matrix,
                                   sizeof matrix, NULL) == MATREP_STATUS_OK);
  CHECK(outcome == MATREP_REP_OUTCOME_FOUND);

  char line[64];
  size_t len = 0;
  CHECK(matrep_matroid_format(u24, line, sizeof line, &len) == MATREP_STATUS_OK);
  CHECK(strcmp(line, "1,2;1,3;1,4;2,3;2,4;3,4") == 0);

  MatrepField *bad = NULL;
  CHECK(matrep_field_new(10, &bad) == MATREP_STATUS_UNSUPPORTED_FIELD);
  char msg[128];
  CHECK(matrep_last_error(msg, sizeof msg) > 0);

  double v = 0.0;
  CHECK(matrep_log2_k(12, 6, &v, NULL) == MATREP_STATUS_OK);
  CHECK(v > 418.41 && v < 418.42);

  matrep_field_free(gf2);
  matrep_field_free(gf3);
  matrep_matroid_free(u24);
  printf("ok %s\n", matrep_version());
  return 0;
}
