// Copyright 2026 The klpref Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef KLPREF_INVARIANTS_HPP_
#define KLPREF_INVARIANTS_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "klpref/instances.hpp"

namespace klpref::invariants {

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;   // the quantity the check compares
  double threshold = 0.0;  // its limit
  std::string detail;
};

// Benchmark hard instances shared with the acceptance suite. Offline: the
// gap keeps the maximum-likelihood misselection curve inside its decay
// window over n in {2^8..2^14}. Online: a lower skew and larger gap
// strengthen the per-round preference signal so the least-squares miss
// rate collapses within T = 2000 rounds.
HardInstanceSpec offline_bench_spec();
HardInstanceSpec online_bench_spec();

// Runs every machine-checkable invariant across the library. Nothing is
// skipped; failures come back as entries, not exceptions.
std::vector<CheckResult> run_all();

// One line per check: status, name, measured value, threshold.
void print_report(std::ostream& os, const std::vector<CheckResult>& results);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace klpref::invariants

#endif  // KLPREF_INVARIANTS_HPP_
