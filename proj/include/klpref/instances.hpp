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

#ifndef KLPREF_INSTANCES_HPP_
#define KLPREF_INSTANCES_HPP_

#include <cstdint>
#include <vector>

#include "klpref/model.hpp"
#include "klpref/rng.hpp"

namespace klpref {

// Two-action family with a skewed reference policy and sign-indexed rewards.
// Action index 0 plays the role of the "-1" arm and index 1 the "+1" arm.
// Per state s: r(s, 0) = B/2 + v_s * a and r(s, 1) = B/2 - b with
// b = beta^-1 log(C - 1), pi_ref(0|s) = 1/C, pi_ref(1|s) = 1 - 1/C, d0
// uniform. When b exceeds B/2 every reward entry is shifted up by b - B/2
// (a state-independent constant, so no observable changes) to stay inside
// [0, B]; this requires a + b <= B.
struct HardInstanceSpec {
  size_t states = 4;
  double skew = 4.0;   // C
  double gap = 0.35;   // a, in (0, B/2)
  double beta = 1.0;
  double bound = 2.0;  // B
  std::vector<int> signs;  // v in {-1,+1}^S; empty means all +1

  // Class attachment: full hypercube of sign vectors when states <= this,
  // otherwise {v, -v} plus extra_class_size distinct random sign vectors.
  size_t max_enumerated_states = 6;
  size_t extra_class_size = 14;
  uint64_t class_seed = 0;
};

// b = beta^-1 log(C - 1) for the given spec.
double hard_instance_bias(const HardInstanceSpec& spec);

Instance hard_instance(const HardInstanceSpec& spec);

// The n-matched gap sqrt(S*C) / ((e^eps - 1) sqrt(n)) used by theory-scaled
// sweeps.
double theory_gap(size_t states, double skew, double epsilon, size_t n);

// sup_{s,a} pi(a|s) / pi_ref(a|s); +inf if pi places mass where pi_ref is 0.
double concentrability(const PolicyTable& pi, const PolicyTable& pi_ref);

// E_{(s,a) ~ d0 x pi*} of the divergence-ratio table under pi_ref, with pi*
// the Gibbs policy of the true reward. Infinite entries propagate.
double single_policy_d_sq(const Instance& inst);

// n i.i.d. records: s ~ d0, a1 and a2 independently from pi_ref, label from
// the Bradley-Terry model, then randomized response.
std::vector<PrivateSample> offline_dataset_gen(const Instance& inst, size_t n,
                                               const PrivacyParams& pp, RngStream& rng);

// Uniform d0, random positive reference rows, uniform [0, B] rewards; the
// class holds the true reward at index 0 followed by class_size - 1 random
// tables.
Instance random_instance(size_t states, size_t actions, size_t class_size, double bound,
                         double beta, RngStream& rng);

}  // namespace klpref

#endif  // KLPREF_INSTANCES_HPP_
