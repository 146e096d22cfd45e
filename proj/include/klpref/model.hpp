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

#ifndef KLPREF_MODEL_HPP_
#define KLPREF_MODEL_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "klpref/rng.hpp"
#include "klpref/tables.hpp"

namespace klpref {

// Randomized-response channel parameters. alpha = e^eps/(e^eps + 1) is the
// keep probability; the infinite-epsilon channel is the identity (alpha = 1
// exactly, no randomness consumed).
class PrivacyParams {
 public:
  explicit PrivacyParams(double epsilon);
  static PrivacyParams non_private();

  double epsilon() const { return epsilon_; }
  double alpha() const { return alpha_; }
  double flip_prob() const { return 1.0 - alpha_; }
  bool is_infinite() const { return infinite_; }

 private:
  PrivacyParams() = default;
  double epsilon_ = 0.0;
  double alpha_ = 1.0;
  bool infinite_ = false;
};

// One preference record before privatization: y = +1 means action a1 was
// preferred over a2.
struct RawSample {
  int s = 0;
  int a1 = 0;
  int a2 = 0;
  int y = 1;
};

// The same record after randomized response; z is the only label the
// learning algorithms may read.
struct PrivateSample {
  int s = 0;
  int a1 = 0;
  int a2 = 0;
  int z = 1;

  bool operator==(const PrivateSample&) const = default;
};

// Finite candidate reward class. All members share shape and bound and lie
// in [0, B].
struct FunctionClass {
  std::vector<RewardTable> members;

  FunctionClass() = default;
  explicit FunctionClass(std::vector<RewardTable> m);

  size_t size() const { return members.size(); }
  const RewardTable& operator[](size_t i) const { return members[i]; }

  // Index of the member exactly equal to r, or -1.
  int index_of(const RewardTable& r) const;
};

// Full problem description: initial state law, reference policy, true
// reward, candidate class, inverse temperature, reward bound.
struct Instance {
  StateDistribution d0;
  PolicyTable pi_ref;
  RewardTable r_star;
  FunctionClass fclass;
  double beta = 1.0;

  Instance() = default;
  Instance(StateDistribution d0_in, PolicyTable pi_ref_in, RewardTable r_star_in,
           FunctionClass fclass_in, double beta_in);

  size_t states() const { return r_star.states(); }
  size_t actions() const { return r_star.actions(); }
  double bound() const { return r_star.bound; }
  bool realizable() const { return fclass.index_of(r_star) >= 0; }
};

// Numerically stable logistic function; the argument is clamped to +-700 so
// exp never overflows.
double sigmoid(double x);

// P[y = +1 | s, a1, a2] under the Bradley-Terry model for reward table r.
double bt_preference_prob(const RewardTable& r, size_t s, size_t a1, size_t a2);

// Draws a label in {-1, +1} from the Bradley-Terry model.
int sample_preference(RngStream& rng, const RewardTable& r, size_t s, size_t a1, size_t a2);

// Keep probability e^eps/(e^eps + 1) of binary randomized response.
double rr_keep_prob(double epsilon);

// Passes y through the randomized-response channel. The identity channel
// (alpha = 1) consumes no randomness.
int privatize_label(RngStream& rng, int y, const PrivacyParams& pp);

// Probability of observing private label z given the pair and reward table:
// alpha * sigma(z * delta) + (1 - alpha) * sigma(-z * delta).
double private_label_prob(const RewardTable& r, int z, size_t s, size_t a1, size_t a2,
                          double alpha);

// E[z | s, a1, a2] of the composed BT + randomized-response channel:
// (2 alpha - 1)(2 sigma(delta_r) - 1).
double debiased_mean(double alpha, double delta_r);

// Row-wise Gibbs tilt of the reference policy: pi(a|s) proportional to
// pi_ref(a|s) * exp(beta * r(s,a)), computed in log space with per-row max
// subtraction. Accepts arbitrary real-valued tables (pessimistic estimates
// may be negative); adding any state-indexed constant to r leaves the
// output unchanged.
PolicyTable gibbs_policy(const Grid& r, const PolicyTable& pi_ref, double beta);
PolicyTable gibbs_policy(const RewardTable& r, const PolicyTable& pi_ref, double beta);

// KL-regularized objective
//   J(pi) = E_{s~d0, a~pi}[ r*(s,a) - beta^-1 log(pi(a|s)/pi_ref(a|s)) ]
// with the 0 log 0 = 0 convention. Throws if pi places mass where pi_ref
// has none.
double objective_value(const PolicyTable& pi, const Instance& inst);

// KL(p || q) over one action row, 0 log 0 = 0, +inf if p > 0 where q = 0.
double kl_row(std::span<const double> p, std::span<const double> q);

// E_{s~d0} KL(pi(.|s) || ref(.|s)).
double expected_kl(const PolicyTable& pi, const PolicyTable& ref, const StateDistribution& d0);

// J(pi*) - J(pi) where pi* is the Gibbs policy of the true reward.
double suboptimality(const PolicyTable& pi, const Instance& inst);

}  // namespace klpref

#endif  // KLPREF_MODEL_HPP_
