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

#ifndef KLPREF_ONLINE_HPP_
#define KLPREF_ONLINE_HPP_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "klpref/model.hpp"
#include "klpref/rng.hpp"

namespace klpref::online {

struct Params {
  int64_t horizon = 1000;  // T
  double delta = 0.1;
  // Regularizer of the uncertainty denominator; <= 0 selects the default
  // Gamma_T^2 / 4. Must satisfy lambda <= Gamma_T^2 / 2 (checked when the
  // run is constructed, where Gamma_T is known).
  double lambda = -1.0;
  double gamma_scale = 1.0;
  // Take the uncertainty sup over the confidence set (default) or over the
  // whole class (ablation).
  bool restrict_to_confidence_set = true;
};

// Gamma_T = gamma_scale * 4(e^-B + 2 + e^B) * sqrt(log(T n_class / delta))
//           / (2 alpha - 1).
// The 4(e^-B + 2 + e^B) factor makes the squared radius exactly twice the
// in-sample error bound of the private least-squares estimate.
double confidence_radius(double bound, int64_t horizon, size_t n_class, double delta,
                         double alpha, double gamma_scale = 1.0);

// Least-squares scan over the class for the debiased-mean regression target:
//   sum_i [ (2 sigma(delta_i^r) - 1)(2 alpha - 1) - z_i ]^2.
// Ties go to the lowest index; empty data returns index 0.
std::pair<int, RewardTable> private_least_squares(const FunctionClass& fclass,
                                                  std::span<const PrivateSample> data,
                                                  double alpha);

// Member indices whose squared in-sample gap to r_bar stays within the
// radius: sum_i (delta_i^r - delta_i^r_bar)^2 + lambda <= gamma_t^2.
std::vector<int> confidence_set(const FunctionClass& fclass, const RewardTable& r_bar,
                                std::span<const PrivateSample> data, double lambda,
                                double gamma_t);

// Worst pair ratio of the pi-centered pointwise gap at (s, a) to the
// regularized in-sample gap norm; 0 for fewer than two members.
double uncertainty(std::span<const int> members, const FunctionClass& fclass, double lambda,
                   size_t s, size_t a, std::span<const PrivateSample> data,
                   const PolicyTable& pi);

// min(1, gamma_t * u).
double exploration_bonus(double gamma_t, double u);

struct StepRecord {
  int64_t t = 0;
  int s = 0, a1 = 0, a2 = 0, z = 0;
  int rbar_index = 0;
  int fset_size = 0;
  double regret_pi2 = 0.0;
  double regret_pi1 = 0.0;
  double u_played = 0.0;
  double cum_min1_u2 = 0.0;
  double bonus_max = 0.0;
  double bonus_mean = 0.0;
  // Diagnostics against the true reward; NaN when it is not in the class.
  double insample_sq_true = 0.0;
  bool optimism_ok = true;
};

struct RunTrace {
  uint64_t stream_key = 0;
  double epsilon = 0.0;
  double gamma_t = 0.0;
  double lambda = 0.0;
  double gamma_scale = 1.0;
  double delta = 0.0;
  std::vector<StepRecord> steps;

  double cum_regret_pi2(int64_t upto) const;
};

// Two-policy optimistic round loop: sample a context and an action from each
// policy, privatize the preference, re-estimate by least squares, tilt the
// exploitation policy, and tilt again by the capped exploration bonus. Exact
// per-round regrets of both policies are recorded.
RunTrace run(const Instance& inst, const PrivacyParams& pp, const Params& params, RngStream rng);

}  // namespace klpref::online

#endif  // KLPREF_ONLINE_HPP_
