/*
 * Copyright 2026 The CorpusForge Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <math.h>
#include <stdio.h>
#include <string.h>

#include "corpusforge/corpusforge.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                 \
    }                                                             \
  } while (0)

int main(void) {
  cf_dccef_result r;
  char* out = NULL;
  cf_optim_config oc;
  cf_rerank_options ro;
  double lr = 0.0;

  EXPECT(strcmp(cf_version(), "0.1.0") == 0);

  EXPECT(cf_dccef_score(1.0, 1.0, NULL, NULL, &r) == CF_OK);
  EXPECT(fabs(r.dual - 0.36787944117144233) < 1e-15);
  EXPECT(cf_dccef_score(2.0, 0.0, NULL, NULL, &r) == CF_OK);
  EXPECT(fabs(r.final_score - 0.049787068367863944) < 1e-15);
  EXPECT(cf_dccef_score(-0.5, 0.0, NULL, NULL, &r) == CF_ERR_CONFIG);
  EXPECT(strlen(cf_last_error()) > 0);

  EXPECT(cf_text_normalize("a\xc2\xa0 b", &out) == CF_OK);
  if (out != NULL) EXPECT(strcmp(out, "a b") == 0);
  cf_free(out);

  cf_optim_config_init(&oc);
  EXPECT(cf_optim_lr_at(1600, &oc, &lr) == CF_OK && lr == 0.0005);

  cf_rerank_options_init(&ro);
  EXPECT(ro.n == 12);

  if (failures != 0) {
    fprintf(stderr, "%d failures\n", failures);
    return 1;
  }
  puts("ok");
  return 0;
}
