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

#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "klpref/instances.hpp"

using namespace klpref;

namespace {

PolicyTable test_random_policy(RngStream& rng, size_t states, size_t actions) {
  Grid probs(states, actions);
  for (size_t s = 0; s < states; ++s) {
    double sum = 0.0;
    for (size_t a = 0; a < actions; ++a) {
      probs(s, a) = -std::log(rng.next_double_pos());
      sum += probs(s, a);
    }
    for (size_t a = 0; a < actions; ++a) probs(s, a) /= sum;
  }
  return PolicyTable(std::move(probs));
}

// Objective recomputed through an independent route: flat iteration, long
// double accumulation, ratio logs taken term by term.
double oracle_objective(const PolicyTable& pi, const Instance& inst) {
  long double total = 0.0L;
  for (size_t s = 0; s < inst.states(); ++s) {
    for (size_t a = 0; a < inst.actions(); ++a) {
      const long double p = pi(s, a);
      if (p <= 0.0L) continue;
      const long double kl_term =
          (std::log(static_cast<long double>(pi(s, a))) -
           std::log(static_cast<long double>(inst.pi_ref(s, a)))) /
          static_cast<long double>(inst.beta);
      total += static_cast<long double>(inst.d0(s)) * p *
               (static_cast<long double>(inst.r_star(s, a)) - kl_term);
    }
  }
  return static_cast<double>(total);
}

// Gibbs rows through the direct (unshifted) normalization formula.
PolicyTable oracle_gibbs(const RewardTable& r, const PolicyTable& ref, double beta) {
  Grid probs(r.states(), r.actions());
  for (size_t s = 0; s < r.states(); ++s) {
    long double z = 0.0L;
    for (size_t a = 0; a < r.actions(); ++a) {
      z += static_cast<long double>(ref(s, a)) * std::exp(static_cast<long double>(beta) * r(s, a));
    }
    for (size_t a = 0; a < r.actions(); ++a) {
      probs(s, a) = static_cast<double>(
          static_cast<long double>(ref(s, a)) *
          std::exp(static_cast<long double>(beta) * r(s, a)) / z);
    }
  }
  return PolicyTable(std::move(probs));
}

}  // namespace

TEST_CASE("sigmoid fixed points") {
  CHECK(sigmoid(0.0) == 0.5);
  CHECK(std::fabs(sigmoid(1.7) + sigmoid(-1.7) - 1.0) <= 1e-15);
  CHECK(sigmoid(std::log(3.0)) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(sigmoid(710.0) == doctest::Approx(1.0));
  CHECK(sigmoid(-710.0) == doctest::Approx(0.0));
  CHECK(std::isfinite(sigmoid(1e308)));
}

TEST_CASE("bt preference probability") {
  Grid values(1, 3);
  values(0, 0) = 0.4;
  values(0, 1) = 0.4;
  values(0, 2) = 1.0;
  const RewardTable r(values, 1.0);
  CHECK(bt_preference_prob(r, 0, 0, 1) == 0.5);
  CHECK(bt_preference_prob(r, 0, 2, 0) == doctest::Approx(sigmoid(0.6)).epsilon(1e-15));
  // Full-range gap: r(s,a1) = B, r(s,a2) = 0.
  Grid extremes(1, 2);
  extremes(0, 0) = 3.0;
  extremes(0, 1) = 0.0;
  CHECK(bt_preference_prob(RewardTable(extremes, 3.0), 0, 0, 1) ==
        doctest::Approx(sigmoid(3.0)).epsilon(1e-15));
  CHECK_THROWS_AS(bt_preference_prob(r, 1, 0, 1), std::out_of_range);
  CHECK_THROWS_AS(bt_preference_prob(r, 0, 0, 3), std::out_of_range);
}

TEST_CASE("preference sampling frequencies and determinism") {
  const double bound = 4.0;
  Grid values(1, 2);
  values(0, 0) = bound;
  values(0, 1) = 0.0;
  const RewardTable r(values, bound);

  const int draws = 1000000;
  RngStream rng(1);
  int plus = 0;
  for (int i = 0; i < draws; ++i) plus += sample_preference(rng, r, 0, 0, 1) == 1;
  const double target = sigmoid(bound);
  const double se = std::sqrt(target * (1 - target) / draws);
  CHECK(std::fabs(static_cast<double>(plus) / draws - target) <= 3 * se);

  Grid flat(1, 2, 0.7);
  const RewardTable rf(flat, 1.0);
  RngStream rng2(2);
  double mean = 0.0;
  for (int i = 0; i < draws; ++i) mean += sample_preference(rng2, rf, 0, 0, 1);
  CHECK(std::fabs(mean / draws) <= 3.0 / std::sqrt(static_cast<double>(draws)));

  RngStream s1(3), s2(3);
  for (int i = 0; i < 100; ++i) {
    CHECK(sample_preference(s1, r, 0, 0, 1) == sample_preference(s2, r, 0, 0, 1));
  }
}

TEST_CASE("randomized response keep probability") {
  CHECK(rr_keep_prob(std::log(3.0)) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(rr_keep_prob(std::log(9.0)) == doctest::Approx(0.9).epsilon(1e-15));
  CHECK(rr_keep_prob(std::numeric_limits<double>::infinity()) == 1.0);
  CHECK_THROWS_AS(rr_keep_prob(0.0), std::invalid_argument);
  CHECK_THROWS_AS(rr_keep_prob(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(PrivacyParams(-2.0), std::invalid_argument);
  CHECK(PrivacyParams(1.0).alpha() ==
        doctest::Approx(std::exp(1.0) / (std::exp(1.0) + 1.0)).epsilon(1e-15));
}

TEST_CASE("randomized response channel") {
  const PrivacyParams identity = PrivacyParams::non_private();
  RngStream rng(4);
  RngStream untouched(4);
  for (int i = 0; i < 100; ++i) {
    const int y = i % 2 ? 1 : -1;
    CHECK(privatize_label(rng, y, identity) == y);
  }
  // The identity channel consumes no randomness.
  CHECK(rng.next_u64() == untouched.next_u64());

  const PrivacyParams pp(1.0);
  const int draws = 1000000;
  RngStream flips(5);
  int flipped = 0;
  for (int i = 0; i < draws; ++i) flipped += privatize_label(flips, 1, pp) == -1;
  const double target = 1.0 / (std::exp(1.0) + 1.0);  // 0.26894142136999512
  const double se = std::sqrt(target * (1 - target) / draws);
  CHECK(std::fabs(static_cast<double>(flipped) / draws - target) <= 3 * se);

  RngStream r2(6);
  for (int i = 0; i < 50; ++i) {
    const int z = privatize_label(r2, -1, pp);
    CHECK((z == 1 || z == -1));
  }
  CHECK_THROWS_AS(privatize_label(r2, 0, pp), std::invalid_argument);
}

TEST_CASE("private label probabilities") {
  RngStream rng(7);
  Instance inst = random_instance(3, 3, 2, 2.0, 1.0, rng);
  const double alpha = rr_keep_prob(0.8);

  Grid flat(2, 2, 0.3);
  const RewardTable rf(flat, 1.0);
  CHECK(private_label_prob(rf, 1, 0, 0, 1, alpha) == 0.5);
  CHECK(private_label_prob(rf, -1, 0, 0, 1, 0.9) == 0.5);

  // alpha = 1 reduces to the raw Bradley-Terry likelihood.
  for (size_t a1 = 0; a1 < inst.actions(); ++a1) {
    const double p = private_label_prob(inst.r_star, 1, 0, a1, 1, 1.0);
    CHECK(p == doctest::Approx(bt_preference_prob(inst.r_star, 0, a1, 1)).epsilon(1e-15));
  }

  for (size_t s = 0; s < inst.states(); ++s) {
    for (size_t a1 = 0; a1 < inst.actions(); ++a1) {
      for (size_t a2 = 0; a2 < inst.actions(); ++a2) {
        const double total = private_label_prob(inst.r_star, 1, s, a1, a2, alpha) +
                             private_label_prob(inst.r_star, -1, s, a1, a2, alpha);
        CHECK(std::fabs(total - 1.0) <= 1e-15);
      }
    }
  }
  CHECK_THROWS_AS(private_label_prob(inst.r_star, 2, 0, 0, 1, alpha), std::invalid_argument);
}

TEST_CASE("debiased channel mean") {
  CHECK(debiased_mean(0.8, 0.0) == 0.0);
  CHECK(debiased_mean(1.0, std::log(3.0)) == doctest::Approx(0.5).epsilon(1e-15));

  const PrivacyParams pp(1.0);
  const double delta = 0.3;
  const int draws = 1000000;
  RngStream rng(8);
  double sum = 0.0;
  for (int i = 0; i < draws; ++i) {
    const int y = rng.bernoulli(sigmoid(delta)) ? 1 : -1;
    sum += privatize_label(rng, y, pp);
  }
  const double expect = debiased_mean(pp.alpha(), delta);
  const double se = std::sqrt((1.0 - expect * expect) / draws);
  CHECK(std::fabs(sum / draws - expect) <= 3 * se);
}

TEST_CASE("gibbs policy") {
  RngStream rng(9);
  const PolicyTable ref = test_random_policy(rng, 3, 4);

  Grid constant_rows(3, 4);
  for (size_t s = 0; s < 3; ++s) {
    for (size_t a = 0; a < 4; ++a) constant_rows(s, a) = 0.3 * static_cast<double>(s);
  }
  const PolicyTable out = gibbs_policy(constant_rows, ref, 2.0);
  CHECK(out.probs.max_abs_diff(ref.probs) <= 1e-12);

  // Rows normalize and match the direct formula.
  Grid values(3, 4);
  for (double& v : values.data()) v = 2.0 * rng.next_double();
  const RewardTable r(values, 2.0);
  const PolicyTable g = gibbs_policy(r, ref, 1.3);
  for (size_t s = 0; s < 3; ++s) {
    double sum = 0.0;
    for (size_t a = 0; a < 4; ++a) sum += g(s, a);
    CHECK(std::fabs(sum - 1.0) <= 1e-12);
  }
  CHECK(g.probs.max_abs_diff(oracle_gibbs(r, ref, 1.3).probs) <= 1e-12);

  CHECK_THROWS_AS(gibbs_policy(r, ref, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(gibbs_policy(r, ref, -1.0), std::invalid_argument);
  Grid zero_ref(3, 4, 0.25);
  zero_ref(1, 2) = 0.0;
  zero_ref(1, 3) = 0.5;
  CHECK_THROWS_AS(gibbs_policy(r, PolicyTable(zero_ref), 1.0), std::invalid_argument);
}

TEST_CASE("gibbs policy ignores state-indexed biases") {
  RngStream rng(10);
  for (int i = 0; i < 100; ++i) {
    const size_t S = 2 + i % 3;
    const size_t A = 2 + i % 4;
    Grid r(S, A);
    for (double& v : r.data()) v = 3.0 * rng.next_double();
    Grid biased = r;
    for (size_t s = 0; s < S; ++s) {
      const double b = 3.0 * (2.0 * rng.next_double() - 1.0);
      for (size_t a = 0; a < A; ++a) biased(s, a) -= b;
    }
    const PolicyTable ref = test_random_policy(rng, S, A);
    const double beta = 0.5 + 2.0 * rng.next_double();
    CHECK(gibbs_policy(r, ref, beta).probs.max_abs_diff(gibbs_policy(biased, ref, beta).probs) <=
          1e-12);
  }
}

TEST_CASE("objective value") {
  RngStream rng(12);
  Instance inst = random_instance(2, 2, 2, 1.0, 2.0, rng);

  // Reference policy has zero KL: the objective is the plain expected reward.
  double expected = 0.0;
  for (size_t s = 0; s < inst.states(); ++s) {
    for (size_t a = 0; a < inst.actions(); ++a) {
      expected += inst.d0(s) * inst.pi_ref(s, a) * inst.r_star(s, a);
    }
  }
  CHECK(objective_value(inst.pi_ref, inst) == doctest::Approx(expected).epsilon(1e-14));

  // The Gibbs policy of the true reward maximizes the objective.
  const PolicyTable pi_star = gibbs_policy(inst.r_star, inst.pi_ref, inst.beta);
  const double j_star = objective_value(pi_star, inst);
  for (int i = 0; i < 200; ++i) {
    const PolicyTable pi = test_random_policy(rng, inst.states(), inst.actions());
    CHECK(objective_value(pi, inst) <= j_star + 1e-12);
  }

  // Independent summation oracle.
  for (int i = 0; i < 20; ++i) {
    const PolicyTable pi = test_random_policy(rng, inst.states(), inst.actions());
    CHECK(std::fabs(objective_value(pi, inst) - oracle_objective(pi, inst)) <= 1e-12);
  }
}

TEST_CASE("suboptimality") {
  RngStream rng(13);
  Instance inst = random_instance(3, 2, 2, 1.5, 1.7, rng);
  const PolicyTable pi_star = gibbs_policy(inst.r_star, inst.pi_ref, inst.beta);
  CHECK(std::fabs(suboptimality(pi_star, inst)) <= 1e-12);

  for (int i = 0; i < 100; ++i) {
    const PolicyTable pi = test_random_policy(rng, inst.states(), inst.actions());
    const double sub = suboptimality(pi, inst);
    CHECK(sub >= -1e-10);
    // The gap equals the scaled divergence to the optimal policy.
    CHECK(std::fabs(sub - expected_kl(pi, pi_star, inst.d0) / inst.beta) <= 1e-9);
    // Brute-force recomputation.
    CHECK(std::fabs(sub - (oracle_objective(oracle_gibbs(inst.r_star, inst.pi_ref, inst.beta),
                                            inst) -
                           oracle_objective(pi, inst))) <= 1e-12);
  }
}

TEST_CASE("kl helpers") {
  const std::vector<double> p = {0.5, 0.5, 0.0};
  const std::vector<double> q = {0.25, 0.25, 0.5};
  CHECK(kl_row(p, q) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  const std::vector<double> q0 = {1.0, 0.0, 0.0};
  CHECK(std::isinf(kl_row(p, q0)));
  CHECK(kl_row(q0, q0) == 0.0);
}

TEST_CASE("type invariants") {
  CHECK_THROWS_AS(PolicyTable(Grid(1, 2, 0.4)), std::invalid_argument);
  Grid neg(1, 2, 0.5);
  neg(0, 0) = -0.1;
  neg(0, 1) = 1.1;
  CHECK_THROWS_AS(PolicyTable{neg}, std::invalid_argument);
  CHECK_THROWS_AS(StateDistribution({0.5, 0.6}), std::invalid_argument);
  CHECK_THROWS_AS(RewardTable(Grid(1, 2, 0.5), 0.0), std::invalid_argument);

  Grid over(1, 2, 1.5);
  RewardTable rt(over, 1.0);
  CHECK_THROWS_AS(rt.check_bounds(), std::invalid_argument);
  CHECK_THROWS_AS(FunctionClass(std::vector<RewardTable>{rt}), std::invalid_argument);
  CHECK_THROWS_AS(FunctionClass(std::vector<RewardTable>{}), std::invalid_argument);

  // Instances demand strictly positive reference rows.
  Grid ref(1, 2);
  ref(0, 0) = 1.0;
  ref(0, 1) = 0.0;
  Grid rv(1, 2, 0.5);
  CHECK_THROWS_AS(Instance(StateDistribution::uniform(1), PolicyTable(ref),
                           RewardTable(rv, 1.0),
                           FunctionClass(std::vector<RewardTable>{RewardTable(rv, 1.0)}), 1.0),
                  std::invalid_argument);
}
