/* Copyright 2026 The hltoc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* Plain C client: the header must compile as C and the library must link. */

#include <stdio.h>

#include "hltoc/hltoc.h"

static int expect(int ok, const char* what) {
  if (!ok) fprintf(stderr, "c_smoke: %s failed: %s\n", what, hltoc_last_error());
  return ok ? 0 : 1;
}

int main(void) {
  hltoc_config* config = NULL;
  hltoc_result* result = NULL;
  int failures = 0;
  int passed = 0;
  double t_star = 0.0;

  failures += expect(hltoc_config_create(&config) == HLTOC_OK, "config_create");
  failures += expect(hltoc_config_set(config, "k", "four") == HLTOC_ERR_CONFIG, "bad value");
  failures += expect(hltoc_config_override(config, "gradients.samples=100") == HLTOC_OK, "override");
  failures += expect(hltoc_check_gradients(config, &result) == HLTOC_OK, "check_gradients");
  failures += expect(hltoc_result_passed(result, &passed) == HLTOC_OK && passed, "passed");
  failures += expect(hltoc_result_tstar(result, &t_star) == HLTOC_ERR_WRONG_KIND, "wrong kind");
  hltoc_result_destroy(result);
  hltoc_config_destroy(config);
  printf("c_smoke: %s, %d failures\n", hltoc_version(), failures);
  return failures == 0 ? 0 : 1;
}
