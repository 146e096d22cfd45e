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

#include "klpref/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace klpref {

PrivacyParams::PrivacyParams(double epsilon) {
  if (std::isinf(epsilon) && epsilon > 0) {
    infinite_ = true;
    epsilon_ = std::numeric_limits<double>::infinity();
    alpha_ = 1.0;
    return;
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("PrivacyParams: epsilon must be positive");
  }
  epsilon_ = epsilon;
  alpha_ = rr_keep_prob(epsilon);
}

PrivacyParams PrivacyParams::non_private() {
  PrivacyParams pp;
  pp.infinite_ = true;
  pp.epsilon_ = std::numeric_limits<double>::infinity();
  pp.alpha_ = 1.0;
  return pp;
}

FunctionClass::FunctionClass(std::vector<RewardTable> m) : members(std::move(m)) {
  if (members.empty()) throw std::invalid_argument("FunctionClass: empty class");
  const auto& head = members.front();
  for (const auto& r : members) {
    if (!r.values.same_shape(head.values) || r.bound != head.bound) {
      throw std::invalid_argument("FunctionClass: members must share shape and bound");
    }
    r.check_bounds();
  }
}

int FunctionClass::index_of(const RewardTable& r) const {
  for (size_t i = 0; i < members.size(); ++i) {
    if (members[i].values == r.values) return static_cast<int>(i);
  }
  return -1;
}

Instance::Instance(StateDistribution d0_in, PolicyTable pi_ref_in, RewardTable r_star_in,
                   FunctionClass fclass_in, double beta_in)
    : d0(std::move(d0_in)),
      pi_ref(std::move(pi_ref_in)),
      r_star(std::move(r_star_in)),
      fclass(std::move(fclass_in)),
      beta(beta_in) {
  if (!(beta > 0.0)) throw std::invalid_argument("Instance: beta must be positive");
  const size_t S = r_star.states();
  const size_t A = r_star.actions();
  if (S < 1 || A < 2) throw std::invalid_argument("Instance: need S >= 1 and A >= 2");
  if (d0.states() != S || pi_ref.states() != S || pi_ref.actions() != A) {
    throw std::invalid_argument("Instance: inconsistent dimensions");
  }
  if (!fclass.members.empty()) {
    const auto& head = fclass.members.front();
    if (!head.values.same_shape(r_star.values) || head.bound != r_star.bound) {
      throw std::invalid_argument("Instance: function class shape/bound mismatch");
    }
  }
  if (!pi_ref.strictly_positive()) {
    throw std::invalid_argument("Instance: reference policy must be strictly positive");
  }
  r_star.check_bounds();
}

double sigmoid(double x) {
  x = std::clamp(x, -700.0, 700.0);
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

namespace {

void check_pair(const RewardTable& r, size_t s, size_t a1, size_t a2) {
  if (s >= r.states() || a1 >= r.actions() || a2 >= r.actions()) {
    throw std::out_of_range("state/action index out of range");
  }
}

}  // namespace

double bt_preference_prob(const RewardTable& r, size_t s, size_t a1, size_t a2) {
  check_pair(r, s, a1, a2);
  return sigmoid(r(s, a1) - r(s, a2));
}

int sample_preference(RngStream& rng, const RewardTable& r, size_t s, size_t a1, size_t a2) {
  return rng.bernoulli(bt_preference_prob(r, s, a1, a2)) ? 1 : -1;
}

double rr_keep_prob(double epsilon) {
  if (std::isinf(epsilon) && epsilon > 0) return 1.0;
  if (!(epsilon > 0.0)) throw std::invalid_argument("rr_keep_prob: epsilon must be positive");
  const double e = std::exp(epsilon);
  return e / (e + 1.0);
}

int privatize_label(RngStream& rng, int y, const PrivacyParams& pp) {
  if (y != 1 && y != -1) throw std::invalid_argument("privatize_label: label must be -1 or +1");
  if (pp.is_infinite()) return y;
  return rng.bernoulli(pp.alpha()) ? y : -y;
}

double private_label_prob(const RewardTable& r, int z, size_t s, size_t a1, size_t a2,
                          double alpha) {
  if (z != 1 && z != -1) throw std::invalid_argument("private_label_prob: label must be -1 or +1");
  check_pair(r, s, a1, a2);
  const double delta = r(s, a1) - r(s, a2);
  return alpha * sigmoid(z * delta) + (1.0 - alpha) * sigmoid(-z * delta);
}

double debiased_mean(double alpha, double delta_r) {
  return (2.0 * alpha - 1.0) * (2.0 * sigmoid(delta_r) - 1.0);
}

PolicyTable gibbs_policy(const Grid& r, const PolicyTable& pi_ref, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("gibbs_policy: beta must be positive");
  if (!r.same_shape(pi_ref.probs)) throw std::invalid_argument("gibbs_policy: shape mismatch");
  const size_t S = r.states();
  const size_t A = r.actions();
  Grid out(S, A);
  std::vector<double> logits(A);
  for (size_t s = 0; s < S; ++s) {
    double m = -std::numeric_limits<double>::infinity();
    for (size_t a = 0; a < A; ++a) {
      const double ref = pi_ref(s, a);
      if (!(ref > 0.0)) throw std::invalid_argument("gibbs_policy: zero reference probability");
      logits[a] = std::log(ref) + beta * r(s, a);
      m = std::max(m, logits[a]);
    }
    double z = 0.0;
    for (size_t a = 0; a < A; ++a) {
      out(s, a) = std::exp(logits[a] - m);
      z += out(s, a);
    }
    for (size_t a = 0; a < A; ++a) out(s, a) /= z;
  }
  return PolicyTable(std::move(out));
}

PolicyTable gibbs_policy(const RewardTable& r, const PolicyTable& pi_ref, double beta) {
  return gibbs_policy(r.values, pi_ref, beta);
}

double objective_value(const PolicyTable& pi, const Instance& inst) {
  if (!pi.probs.same_shape(inst.pi_ref.probs)) {
    throw std::invalid_argument("objective_value: policy shape mismatch");
  }
  double total = 0.0;
  for (size_t s = 0; s < inst.states(); ++s) {
    double inner = 0.0;
    for (size_t a = 0; a < inst.actions(); ++a) {
      const double p = pi(s, a);
      if (p == 0.0) continue;  // 0 log 0 = 0
      const double ref = inst.pi_ref(s, a);
      if (!(ref > 0.0)) {
        throw std::domain_error("objective_value: pi > 0 where pi_ref = 0 (infinite KL)");
      }
      inner += p * (inst.r_star(s, a) - std::log(p / ref) / inst.beta);
    }
    total += inst.d0(s) * inner;
  }
  return total;
}

double kl_row(std::span<const double> p, std::span<const double> q) {
  double kl = 0.0;
  for (size_t a = 0; a < p.size(); ++a) {
    if (p[a] == 0.0) continue;
    if (!(q[a] > 0.0)) return std::numeric_limits<double>::infinity();
    kl += p[a] * std::log(p[a] / q[a]);
  }
  return kl;
}

double expected_kl(const PolicyTable& pi, const PolicyTable& ref, const StateDistribution& d0) {
  double total = 0.0;
  const size_t A = pi.actions();
  for (size_t s = 0; s < pi.states(); ++s) {
    std::span<const double> p(&pi.probs.data()[s * A], A);
    std::span<const double> q(&ref.probs.data()[s * A], A);
    total += d0(s) * kl_row(p, q);
  }
  return total;
}

double suboptimality(const PolicyTable& pi, const Instance& inst) {
  const PolicyTable pi_star = gibbs_policy(inst.r_star, inst.pi_ref, inst.beta);
  return objective_value(pi_star, inst) - objective_value(pi, inst);
}

}  // namespace klpref
