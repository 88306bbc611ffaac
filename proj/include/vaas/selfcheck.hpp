/*
 * Copyright 2026 The VAAS Authors
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

// Oracle suites run by `vaas selfcheck` and reused by the acceptance suite.
// Each suite compares an engine code path against its brute-force oracle.

#ifndef VAAS_SELFCHECK_HPP_
#define VAAS_SELFCHECK_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace vaas {

struct SelfcheckOptions {
  std::uint64_t seed = 1;
  double gradient_tolerance = 1e-4;
  double gradient_step = 1e-4;
  int patch_instances = 1000;
  int tensor_instances = 1000;
};

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Sorted, stable list of suite names.
std::vector<std::string> selfcheck_suite_names();

// Throws ValidationError for an unknown name.
SuiteResult run_suite(std::string_view name, const SelfcheckOptions& opts);

std::vector<SuiteResult> run_selfcheck(const SelfcheckOptions& opts);

}  // namespace vaas

#endif  // VAAS_SELFCHECK_HPP_
