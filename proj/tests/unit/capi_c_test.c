/* Copyright 2026 The lpx Authors
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

/* The public header compiles as C and the library links from C. */

#include <stdio.h>
#include <string.h>

#include "lpx/lpx.h"

int main(void) {
  lpx_snapshot* snapshot = NULL;
  lpx_explanation* explanation = NULL;
  int mv = -1, cv = -1, side = -1;
  if (lpx_snapshot_load(LPX_FIXTURE_DIR "/sec32.json", &snapshot) != LPX_OK) {
    fprintf(stderr, "%s\n", lpx_last_error());
    return 1;
  }
  if (lpx_explain(snapshot, &explanation) != LPX_OK) {
    fprintf(stderr, "%s\n", lpx_last_error());
    return 1;
  }
  if (lpx_explanation_pair(explanation, 0, &mv, &cv, &side) != LPX_OK) return 1;
  lpx_explanation_free(explanation);
  lpx_snapshot_free(snapshot);
  if (mv != 0 || cv != 0 || side != 1) return 1;
  if (lpx_snapshot_load("/missing.json", &snapshot) != LPX_ERR_INPUT) return 1;
  if (strcmp(lpx_last_error_code(), "IoError") != 0) return 1;
  printf("ok\n");
  return 0;
}
