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

#include "klpref/instances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "klpref/offline.hpp"

namespace klpref {

namespace {

// Reward table of one sign vector, plus the constant lift that keeps
// entries inside [0, B] when b > B/2.
RewardTable sign_reward(const std::vector<int>& signs, double gap, double bias, double bound,
                        double lift) {
  const size_t S = signs.size();
  Grid values(S, 2);
  for (size_t s = 0; s < S; ++s) {
    values(s, 0) = bound / 2.0 + signs[s] * gap + lift;
    values(s, 1) = bound / 2.0 - bias + lift;
  }
  return RewardTable(std::move(values), bound);
}

std::vector<int> nth_sign_vector(size_t k, size_t states) {
  std::vector<int> v(states);
  for (size_t s = 0; s < states; ++s) v[s] = (k >> s) & 1 ? 1 : -1;
  return v;
}

}  // namespace

double hard_instance_bias(const HardInstanceSpec& spec) {
  if (!(spec.beta > 0.0)) throw std::invalid_argument("hard_instance: beta must be positive");
  if (!(spec.skew > 1.0)) throw std::invalid_argument("hard_instance: skew must exceed 1");
  return std::log(spec.skew - 1.0) / spec.beta;
}

Instance hard_instance(const HardInstanceSpec& spec) {
  const size_t S = spec.states;
  const double B = spec.bound;
  if (S < 1) throw std::invalid_argument("hard_instance: need at least one state");
  if (!(B > 0.0)) throw std::invalid_argument("hard_instance: bound must be positive");
  if (!(spec.gap > 0.0 && spec.gap < B / 2.0)) {
    throw std::invalid_argument("hard_instance: gap must lie in (0, B/2)");
  }
  const double b = hard_instance_bias(spec);
  if (!(b > 0.0)) throw std::invalid_argument("hard_instance: bias b = log(C-1)/beta must be positive");
  if (!(spec.gap + b <= B)) {
    throw std::invalid_argument("hard_instance: gap + bias exceeds the reward bound");
  }
  const double lift = std::max(0.0, b - B / 2.0);

  std::vector<int> v = spec.signs;
  if (v.empty()) v.assign(S, 1);
  if (v.size() != S) throw std::invalid_argument("hard_instance: sign vector length mismatch");
  for (int e : v) {
    if (e != 1 && e != -1) throw std::invalid_argument("hard_instance: signs must be -1 or +1");
  }

  Grid ref(S, 2);
  for (size_t s = 0; s < S; ++s) {
    ref(s, 0) = 1.0 / spec.skew;
    ref(s, 1) = 1.0 - 1.0 / spec.skew;
  }

  std::vector<RewardTable> members;
  if (S <= spec.max_enumerated_states) {
    members.reserve(size_t{1} << S);
    for (size_t k = 0; k < (size_t{1} << S); ++k) {
      members.push_back(sign_reward(nth_sign_vector(k, S), spec.gap, b, B, lift));
    }
  } else {
    std::vector<int> neg(v);
    for (int& e : neg) e = -e;
    std::set<std::vector<int>> seen{v, neg};
    members.push_back(sign_reward(v, spec.gap, b, B, lift));
    members.push_back(sign_reward(neg, spec.gap, b, B, lift));
    RngStream rng(spec.class_seed);
    while (members.size() < 2 + spec.extra_class_size) {
      std::vector<int> w(S);
      for (size_t s = 0; s < S; ++s) w[s] = rng.bernoulli(0.5) ? 1 : -1;
      if (seen.insert(w).second) members.push_back(sign_reward(w, spec.gap, b, B, lift));
    }
  }

  return Instance(StateDistribution::uniform(S), PolicyTable(std::move(ref)),
                  sign_reward(v, spec.gap, b, B, lift), FunctionClass(std::move(members)),
                  spec.beta);
}

double theory_gap(size_t states, double skew, double epsilon, size_t n) {
  if (n == 0) throw std::invalid_argument("theory_gap: n must be at least 1");
  if (!(epsilon > 0.0) || std::isinf(epsilon)) {
    throw std::invalid_argument("theory_gap: epsilon must be positive and finite");
  }
  return std::sqrt(static_cast<double>(states) * skew) /
         ((std::exp(epsilon) - 1.0) * std::sqrt(static_cast<double>(n)));
}

double concentrability(const PolicyTable& pi, const PolicyTable& pi_ref) {
  if (!pi.probs.same_shape(pi_ref.probs)) {
    throw std::invalid_argument("concentrability: shape mismatch");
  }
  double worst = 0.0;
  for (size_t s = 0; s < pi.states(); ++s) {
    for (size_t a = 0; a < pi.actions(); ++a) {
      const double ref = pi_ref(s, a);
      if (ref == 0.0) {
        if (pi(s, a) > 0.0) return std::numeric_limits<double>::infinity();
        continue;
      }
      worst = std::max(worst, pi(s, a) / ref);
    }
  }
  return worst;
}

double single_policy_d_sq(const Instance& inst) {
  const Grid table = offline::d_divergence_sq_table(inst.fclass, inst.pi_ref, inst.d0);
  const PolicyTable pi_star = gibbs_policy(inst.r_star, inst.pi_ref, inst.beta);
  double total = 0.0;
  for (size_t s = 0; s < inst.states(); ++s) {
    for (size_t a = 0; a < inst.actions(); ++a) {
      const double w = inst.d0(s) * pi_star(s, a);
      if (w == 0.0) continue;
      if (std::isinf(table(s, a))) return std::numeric_limits<double>::infinity();
      total += w * table(s, a);
    }
  }
  return total;
}

std::vector<PrivateSample> offline_dataset_gen(const Instance& inst, size_t n,
                                               const PrivacyParams& pp, RngStream& rng) {
  std::vector<PrivateSample> data;
  data.reserve(n);
  const size_t A = inst.actions();
  const auto& ref = inst.pi_ref.probs.data();
  for (size_t i = 0; i < n; ++i) {
    const size_t s = rng.categorical(inst.d0.probs);
    const size_t a1 = rng.categorical(std::span<const double>(&ref[s * A], A));
    const size_t a2 = rng.categorical(std::span<const double>(&ref[s * A], A));
    const int y = sample_preference(rng, inst.r_star, s, a1, a2);
    const int z = privatize_label(rng, y, pp);
    data.push_back({static_cast<int>(s), static_cast<int>(a1), static_cast<int>(a2), z});
  }
  return data;
}

Instance random_instance(size_t states, size_t actions, size_t class_size, double bound,
                         double beta, RngStream& rng) {
  if (states < 1 || actions < 2) throw std::invalid_argument("random_instance: need S >= 1, A >= 2");
  if (class_size < 1) throw std::invalid_argument("random_instance: need a nonempty class");
  if (!(bound > 0.0)) throw std::invalid_argument("random_instance: bound must be positive");

  Grid ref(states, actions);
  for (size_t s = 0; s < states; ++s) {
    double sum = 0.0;
    for (size_t a = 0; a < actions; ++a) {
      ref(s, a) = -std::log(rng.next_double_pos());
      sum += ref(s, a);
    }
    for (size_t a = 0; a < actions; ++a) ref(s, a) /= sum;
  }

  auto random_table = [&]() {
    Grid values(states, actions);
    for (double& v : values.data()) v = bound * rng.next_double();
    return RewardTable(std::move(values), bound);
  };

  RewardTable r_star = random_table();
  std::vector<RewardTable> members;
  members.push_back(r_star);
  for (size_t i = 1; i < class_size; ++i) members.push_back(random_table());

  return Instance(StateDistribution::uniform(states), PolicyTable(std::move(ref)),
                  std::move(r_star), FunctionClass(std::move(members)), beta);
}

}  // namespace klpref
