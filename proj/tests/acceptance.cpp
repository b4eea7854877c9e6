/*
 *   Copyright 2026 The isolab Authors
 *
 *   Licensed under the Apache License, Version 2.0 (the "License");
 *   you may not use this file except in compliance with the License.
 *   You may obtain a copy of the License at
 *
 *       http://www.apache.org/licenses/LICENSE-2.0
 *
 *   Unless required by applicable law or agreed to in writing, software
 *   distributed under the License is distributed on an "AS IS" BASIS,
 *   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 *   See the License for the specific language governing permissions and
 *   limitations under the License.
 */

// Prints one PASS/FAIL line per acceptance criterion; exits nonzero if any fails.
// Optional arguments restrict the run to the listed criterion numbers.

#include <cstdlib>
#include <iostream>
#include <map>
#include <set>
#include <string>

#include "isolab/acceptance.hpp"

int main(int argc, char** argv) {
  using namespace isolab;
  std::set<unsigned> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(static_cast<unsigned>(std::strtoul(argv[i], nullptr, 10)));
  if (wanted.empty())
    for (unsigned id = 1; id <= kCriterionCount; ++id) wanted.insert(id);

  std::map<unsigned, CriterionResult> results;
  bool all_pass = true;
  for (unsigned id = 1; id < kCriterionCount; ++id) {
    if (!wanted.count(id) && !(wanted.count(kCriterionCount) && criterion_is_randomized(id))) continue;
    CriterionResult r;
    try {
      r = run_criterion(id);
    } catch (const std::exception& e) {
      r = {id, "exception", false, e.what(), {}, 0.0, criterion_is_randomized(id)};
    }
    results.emplace(id, r);
    if (wanted.count(id)) {
      std::cout << format_criterion_line(r) << std::endl;
      all_pass = all_pass && r.pass;
    }
  }
  if (wanted.count(kCriterionCount)) {
    const CriterionResult r = run_reproducibility(results);
    std::cout << format_criterion_line(r) << std::endl;
    all_pass = all_pass && r.pass;
  }
  std::cout << (all_pass ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL") << std::endl;
  return all_pass ? EXIT_SUCCESS : EXIT_FAILURE;
}
