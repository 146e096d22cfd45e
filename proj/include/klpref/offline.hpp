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

#ifndef KLPREF_OFFLINE_HPP_
#define KLPREF_OFFLINE_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "klpref/model.hpp"

namespace klpref::offline {

enum class BonusMode { kTheory, kCalibrated };

struct Params {
  double delta = 0.1;
  double c_bonus = 16.0;
  double tau = 0.0;  // net resolution; 0 for finite classes
  BonusMode bonus_mode = BonusMode::kTheory;
  // Bonus assigned when the divergence ratio is infinite; <= 0 means 2B.
  double bonus_cap = -1.0;
  // Calibrated mode: replay budget and stream for estimating the multiplier.
  int calib_replays = 200;
  uint64_t calib_seed = 9001;
  // When set, calibrated mode uses this multiplier instead of re-estimating.
  std::optional<double> bonus_multiplier;
};

struct Fit {
  RewardTable r_bar;   // maximum-likelihood member
  Grid gamma;          // pessimism bonus per (s, a)
  Grid r_hat;          // r_bar - gamma, unclipped
  PolicyTable pi_hat;  // Gibbs policy of r_hat
  int mle_index = 0;
  std::vector<double> log_liks;  // private log-likelihood per class member
  Grid d_sq;                     // divergence ratio table under pi_ref
  double d_pi_star_sq = 0.0;     // its mean under d0 x pi*
  double bonus_multiplier = 1.0;
};

// Private log-likelihood of one class member on the privatized records.
double log_likelihood(const RewardTable& r, std::span<const PrivateSample> data, double alpha);

// Exhaustive maximum-likelihood scan over the class; ties go to the lowest
// index. Requires nonempty data unless the class is a singleton.
std::pair<int, RewardTable> private_mle(const FunctionClass& fclass,
                                        std::span<const PrivateSample> data, double alpha);

// Worst-case ratio, over ordered member pairs (g, h), of the squared
// mean-centered pointwise gap at (s, a) to the on-policy variance of g - h:
//   max_{g != h} (g(s,a) - h(s,a) - b_gh(s))^2
//               / E_{s'~d0} Var_{a'~pi(.|s')}[g - h],
// with b_gh(s) = E_{a'~pi(.|s)}[g(s,a') - h(s,a')]. Pairs with both
// numerator and denominator below 1e-12 contribute 0; a vanishing
// denominator against a live numerator yields +inf.
double d_divergence_sq(const FunctionClass& fclass, size_t s, size_t a, const PolicyTable& pi,
                       const StateDistribution& d0);

// The same quantity for every (s, a) at once; pair denominators are shared
// across the table.
Grid d_divergence_sq_table(const FunctionClass& fclass, const PolicyTable& pi,
                           const StateDistribution& d0);

// Width of the pessimism adjustment:
//   sqrt( d_sq * (c e^B / (2 alpha - 1)^2) * (log(n_class/delta)/n + tau) ).
// An infinite d_sq maps to the cap (cap <= 0 means 2B).
double pessimism_bonus(double d_sq, double alpha, size_t n, size_t n_class, double delta,
                       double c_bonus, double tau, double bound, double cap = -1.0);

// Smallest multiplier from a fixed grid such that the one-sided event
//   r_bar(s,a) - b(s) - r_star(s,a) <= m * Gamma(s,a)   for all (s, a),
// with b(s) the pi_ref-mean of r_bar - r_star, held in at least a 1 - delta
// fraction of seeded calibration replays at sample size n.
double calibrate_bonus_multiplier(const Instance& inst, size_t n, const PrivacyParams& pp,
                                  const Params& params);

// Pessimistic offline fit: maximum likelihood over the class, per-(s,a)
// bonus subtraction, Gibbs policy of the result.
Fit fit(const Instance& inst, std::span<const PrivateSample> data, const PrivacyParams& pp,
        const Params& params);

}  // namespace klpref::offline

#endif  // KLPREF_OFFLINE_HPP_
