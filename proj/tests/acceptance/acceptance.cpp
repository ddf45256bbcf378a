// SPDX-License-Identifier: Apache-2.0
//
// rissec: secrecy-rate optimization for RIS-assisted multi-user downlinks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Runs all thirteen acceptance checks and prints one line each.
// Exit status is 0 only if every check passes.

#include "rissec/validation.hpp"

#include <cstdio>

int main() {
  using namespace rissec;
  const ValidationOptions opts;
  int failures = 0;
  for (const auto& suite : validation_suites()) {
    const SuiteResult r = run_suite(suite, opts);
    failures += r.passed ? 0 : 1;
    std::printf("criterion %2d %-20s %s  %s  (%.1f s)\n", r.criterion, r.name.c_str(), r.passed ? "PASS" : "FAIL",
                r.detail.c_str(), r.seconds);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(validation_suites().size()) - failures,
              validation_suites().size());
  return failures == 0 ? 0 : 1;
}
