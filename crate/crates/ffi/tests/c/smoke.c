#include <stdio.h>
#include <string.h>

#include "spindiff.h"

#define CHECK(cond)                                                   \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "check failed at line %d: %s\n", __LINE__, #cond); \
      return 1;                                                       \
    }                                                                 \
  } while (0)

int main(void) {
  SdExpr *e = NULL;
  CHECK(sd_expr_parse("cos(theta/2)", &e) == SD_STATUS_OK);
  double re = 0, im = 0;
  CHECK(sd_expr_eval(e, 0.0, 0.0, 0.0, 0.0, &re, &im) == SD_STATUS_OK);
  CHECK(re == 1.0 && im == 0.0);
  char *text = NULL;
  CHECK(sd_expr_print(e, SD_PRINT_STYLE_EXPONENTIAL, &text) == SD_STATUS_OK);
  CHECK(strcmp(text, "(1/2)*exp(i*theta/2) + (1/2)*exp(-i*theta/2)") == 0);
  sd_string_free(text);
  sd_expr_free(e);

  SdExpr *bad = NULL;
  CHECK(sd_expr_parse("sin(theta/3)", &bad) == SD_STATUS_PARSE_ERROR);
  CHECK(bad == NULL);
  CHECK(sd_last_error_offset() == 4);
  CHECK(strstr(sd_last_error_message(), "lattice violation") != NULL);

  SdOp *sx = NULL, *sy = NULL, *sz = NULL, *c = NULL;
  CHECK(sd_op_build("Sx", &sx) == SD_STATUS_OK);
  CHECK(sd_op_build("Sy", &sy) == SD_STATUS_OK);
  CHECK(sd_op_build("Sz", &sz) == SD_STATUS_OK);
  CHECK(sd_op_commutator(sx, sx, &c) == SD_STATUS_OK);
  bool zero = false;
  CHECK(sd_op_is_zero(c, &zero) == SD_STATUS_OK && zero);
  sd_op_free(c);

  SdSpinor *s = NULL, *out = NULL;
  CHECK(sd_spinor_build("z+", &s) == SD_STATUS_OK);
  CHECK(sd_op_apply(sz, s, &out) == SD_STATUS_OK);
  SdExpr *top = NULL;
  CHECK(sd_spinor_component(out, 0, &top) == SD_STATUS_OK);
  CHECK(sd_expr_eval(top, 1.0, 0.5, 0.0, 0.0, &re, &im) == SD_STATUS_OK);
  sd_expr_free(top);
  sd_spinor_free(out);
  sd_spinor_free(s);
  CHECK(sd_op_build("Sw", &c) == SD_STATUS_UNKNOWN_IDENTIFIER);

  char *json = NULL;
  uint32_t failures = 99;
  CHECK(sd_verify("commutators", 1, &json, &failures) == SD_STATUS_OK);
  CHECK(failures == 0);
  CHECK(strstr(json, "\"suite\": \"commutators\"") != NULL);
  sd_string_free(json);

  sd_op_free(sx);
  sd_op_free(sy);
  sd_op_free(sz);
  printf("spindiff %s ok\n", sd_version());
  return 0;
}
