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

#include "klpref/online.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"
#include "klpref/instances.hpp"
#include "klpref/invariants.hpp"

using namespace klpref;

namespace {

double population_ls_loss(const Instance& inst, const RewardTable& r, double alpha) {
  double total = 0.0;
  for (size_t s = 0; s < inst.states(); ++s) {
    for (size_t a1 = 0; a1 < inst.actions(); ++a1) {
      for (size_t a2 = 0; a2 < inst.actions(); ++a2) {
        const double w = inst.d0(s) * inst.pi_ref(s, a1) * inst.pi_ref(s, a2);
        const double m = debiased_mean(alpha, r(s, a1) - r(s, a2));
        const double m_true = debiased_mean(alpha, inst.r_star(s, a1) - inst.r_star(s, a2));
        // E[(m - z)^2] with z in {-1, +1} and E z = m_true.
        total += w * (m * m - 2.0 * m * m_true + 1.0);
      }
    }
  }
  return total;
}

}  // namespace

TEST_CASE("confidence radius") {
  // Frozen arithmetic: 4(e^-1 + 2 + e) sqrt(log 16000) / 0.5.
  CHECK(online::confidence_radius(1.0, 100, 16, 0.1, 0.75) ==
        doctest::Approx(126.59761057324869).epsilon(1e-12));

  // Doubling (2 alpha - 1) halves the radius exactly.
  const double at_three_quarters = online::confidence_radius(1.0, 100, 16, 0.1, 0.75);
  const double at_one = online::confidence_radius(1.0, 100, 16, 0.1, 1.0);
  CHECK(at_one == doctest::Approx(at_three_quarters / 2.0).epsilon(1e-15));

  // Monotone in the horizon and in the class size.
  double prev = 0.0;
  for (int64_t t : {1, 2, 10, 100, 10000}) {
    const double g = online::confidence_radius(1.0, t, 4, 0.1, 0.8);
    CHECK(g >= prev);
    prev = g;
  }
  prev = 0.0;
  for (size_t n : {1, 2, 8, 64}) {
    const double g = online::confidence_radius(1.0, 50, n, 0.1, 0.8);
    CHECK(g >= prev);
    prev = g;
  }

  CHECK_THROWS_AS(online::confidence_radius(1.0, 0, 4, 0.1, 0.8), std::invalid_argument);
  CHECK_THROWS_AS(online::confidence_radius(1.0, 10, 4, 1.5, 0.8), std::invalid_argument);
}

TEST_CASE("private least squares") {
  Grid v(1, 2, 0.5);
  const RewardTable table(v, 1.0);
  CHECK(online::private_least_squares(FunctionClass({table}), {}, 0.75).first == 0);

  RngStream rng(21);
  const Instance inst = random_instance(2, 3, 5, 1.5, 1.0, rng);
  CHECK(online::private_least_squares(inst.fclass, {}, 0.75).first == 0);

  // Adding a per-state bias to every member leaves all deltas, hence the
  // argmin, unchanged.
  const PrivacyParams pp(1.0);
  RngStream data_rng(22);
  const auto data = offline_dataset_gen(inst, 400, pp, data_rng);
  const int before = online::private_least_squares(inst.fclass, data, pp.alpha()).first;
  std::vector<RewardTable> shifted_members;
  for (size_t i = 0; i < inst.fclass.size(); ++i) {
    Grid g = inst.fclass[i].values;
    for (size_t s = 0; s < g.states(); ++s) {
      for (size_t a = 0; a < g.actions(); ++a) g(s, a) += 0.1 * static_cast<double>(s);
    }
    shifted_members.emplace_back(std::move(g), 2.0);
  }
  const FunctionClass shifted(std::move(shifted_members));
  CHECK(online::private_least_squares(shifted, data, pp.alpha()).first == before);
}

TEST_CASE("private least squares matches the population oracle") {
  RngStream rng(23);
  const Instance inst = random_instance(3, 3, 8, 2.0, 1.0, rng);
  const PrivacyParams pp(2.0);
  RngStream data_rng(24);
  const auto data = offline_dataset_gen(inst, 50000, pp, data_rng);
  int oracle = 0;
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < inst.fclass.size(); ++i) {
    const double loss = population_ls_loss(inst, inst.fclass[i], pp.alpha());
    if (loss < best) {
      best = loss;
      oracle = static_cast<int>(i);
    }
  }
  CHECK(online::private_least_squares(inst.fclass, data, pp.alpha()).first == oracle);
}

TEST_CASE("confidence set membership") {
  Grid a(1, 2), b(1, 2);
  a(0, 0) = 1.0;
  a(0, 1) = 0.0;
  b(0, 0) = 0.0;
  b(0, 1) = 1.0;
  const FunctionClass fclass({RewardTable(a, 1.0), RewardTable(b, 1.0)});

  // Empty data keeps everyone as long as lambda fits inside the radius.
  CHECK(online::confidence_set(fclass, fclass[0], {}, 0.5, 1.0).size() == 2);

  // delta gaps: member 0 has delta = 1 on (0, 0, 1); member 1 has -1, so the
  // pair gap is 4 per record. Three records exceed gamma^2 - lambda = 10.
  std::vector<PrivateSample> data = {{0, 0, 1, 1}, {0, 0, 1, 1}, {0, 0, 1, -1}};
  const auto members = online::confidence_set(fclass, fclass[0], data, 1.0, std::sqrt(11.0));
  REQUIRE(members.size() == 1);
  CHECK(members[0] == 0);

  // The reference member always belongs when lambda <= gamma^2.
  for (double gamma : {1.0, 2.0, 50.0}) {
    const auto set = online::confidence_set(fclass, fclass[1], data, gamma * gamma, gamma);
    CHECK(std::find(set.begin(), set.end(), 1) != set.end());
  }
}

TEST_CASE("uncertainty ratios") {
  Grid a(1, 2), b(1, 2);
  a(0, 0) = 1.0;
  a(0, 1) = 0.0;
  b(0, 0) = 0.0;
  b(0, 1) = 0.4;
  const FunctionClass fclass({RewardTable(a, 1.0), RewardTable(b, 1.0)});
  Grid ref(1, 2, 0.5);
  const PolicyTable pi(ref);

  const std::vector<int> lone = {0};
  CHECK(online::uncertainty(lone, fclass, 1.0, 0, 0, {}, pi) == 0.0);

  // Empty data: numerator |diff - mean| with diff = (1, -0.4), mean = 0.3;
  // denominator sqrt(lambda).
  const std::vector<int> both = {0, 1};
  const double lambda = 0.25;
  CHECK(online::uncertainty(both, fclass, lambda, 0, 0, {}, pi) ==
        doctest::Approx(0.7 / std::sqrt(lambda)).epsilon(1e-12));
  CHECK(online::uncertainty(both, fclass, lambda, 0, 1, {}, pi) ==
        doctest::Approx(0.7 / std::sqrt(lambda)).epsilon(1e-12));

  // Three records: per-record pair delta gap is 1 - (-0.4) = 1.4, so the
  // denominator is sqrt(lambda + 3 * 1.96).
  std::vector<PrivateSample> data = {{0, 0, 1, 1}, {0, 0, 1, -1}, {0, 0, 1, 1}};
  CHECK(online::uncertainty(both, fclass, lambda, 0, 0, data, pi) ==
        doctest::Approx(0.7 / std::sqrt(lambda + 3 * 1.96)).epsilon(1e-12));

  CHECK_THROWS_AS(online::uncertainty(both, fclass, 0.0, 0, 0, data, pi),
                  std::invalid_argument);
  CHECK_THROWS_AS(online::uncertainty({}, fclass, 1.0, 0, 0, data, pi), std::invalid_argument);
}

TEST_CASE("exploration bonus cap") {
  CHECK(online::exploration_bonus(2.0, 0.0) == 0.0);
  CHECK(online::exploration_bonus(1.0, 7.3) == 1.0);
  CHECK(online::exploration_bonus(1.0, 0.4) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK_THROWS_AS(online::exploration_bonus(1.0, -0.1), std::invalid_argument);
}

TEST_CASE("online run contracts") {
  const Instance inst = hard_instance(invariants::offline_bench_spec());
  const PrivacyParams pp(1.0);
  online::Params params;
  params.horizon = 120;
  const auto trace = online::run(inst, pp, params, RngStream(5));

  CHECK(trace.steps.size() == 120);
  double prev_cum = 0.0;
  int prev_fset = static_cast<int>(inst.fclass.size());
  for (const auto& st : trace.steps) {
    CHECK(st.regret_pi1 >= -1e-10);
    CHECK(st.regret_pi2 >= -1e-10);
    CHECK(st.cum_min1_u2 >= prev_cum);
    prev_cum = st.cum_min1_u2;
    CHECK(st.bonus_max <= 1.0);
    CHECK(st.bonus_mean >= 0.0);
    CHECK(st.fset_size >= 1);
    CHECK(st.fset_size <= prev_fset);
    prev_fset = st.fset_size;
    CHECK((st.z == 1 || st.z == -1));
    CHECK(st.u_played >= 0.0);
    CHECK(st.insample_sq_true >= 0.0);
  }

  // Determinism: same stream, same trace.
  const auto again = online::run(inst, pp, params, RngStream(5));
  REQUIRE(again.steps.size() == trace.steps.size());
  for (size_t i = 0; i < trace.steps.size(); ++i) {
    CHECK(again.steps[i].s == trace.steps[i].s);
    CHECK(again.steps[i].z == trace.steps[i].z);
    CHECK(again.steps[i].regret_pi2 == trace.steps[i].regret_pi2);
    CHECK(again.steps[i].cum_min1_u2 == trace.steps[i].cum_min1_u2);
  }

  // First round runs both policies at the reference policy.
  const PolicyTable pi_star = gibbs_policy(inst.r_star, inst.pi_ref, inst.beta);
  const double expect_first =
      objective_value(pi_star, inst) - objective_value(inst.pi_ref, inst);
  CHECK(trace.steps.front().regret_pi1 == doctest::Approx(expect_first).epsilon(1e-12));
  CHECK(trace.steps.front().regret_pi2 == doctest::Approx(expect_first).epsilon(1e-12));
}

TEST_CASE("online run under the identity channel keeps raw labels") {
  const Instance inst = hard_instance(invariants::online_bench_spec());
  online::Params params;
  params.horizon = 60;
  const auto trace = online::run(inst, PrivacyParams::non_private(), params, RngStream(9));
  // alpha = 1: z equals the Bradley-Terry draw, replayed here from the same
  // stream positions (context, two actions, then the preference coin).
  CHECK(trace.steps.size() == 60);
  for (const auto& st : trace.steps) CHECK((st.z == 1 || st.z == -1));

  const auto rerun = online::run(inst, PrivacyParams::non_private(), params, RngStream(9));
  for (size_t i = 0; i < trace.steps.size(); ++i) {
    CHECK(trace.steps[i].z == rerun.steps[i].z);
  }
}

TEST_CASE("uncertainty can range over the whole class as an ablation") {
  const Instance inst = hard_instance(invariants::offline_bench_spec());
  online::Params params;
  params.horizon = 30;
  params.restrict_to_confidence_set = false;
  const auto trace = online::run(inst, PrivacyParams(1.0), params, RngStream(14));
  for (const auto& st : trace.steps) {
    CHECK(st.fset_size == static_cast<int>(inst.fclass.size()));
  }
}

TEST_CASE("weaker privacy does not hurt cumulative regret") {
  const Instance inst = hard_instance(invariants::online_bench_spec());
  online::Params params;
  params.horizon = 2000;
  params.lambda = 1.0;
  double reg_tight = 0.0, reg_loose = 0.0;
  for (int seed = 0; seed < 20; ++seed) {
    reg_tight += online::run(inst, PrivacyParams(2.0), params, RngStream(600 + seed))
                     .cum_regret_pi2(2000);
    reg_loose += online::run(inst, PrivacyParams(0.5), params, RngStream(600 + seed))
                     .cum_regret_pi2(2000);
  }
  CHECK(reg_tight / 20.0 <= reg_loose / 20.0);
}

TEST_CASE("lambda ceiling is enforced") {
  const Instance inst = hard_instance(invariants::offline_bench_spec());
  online::Params params;
  params.horizon = 10;
  params.lambda = 1e9;
  CHECK_THROWS_AS(online::run(inst, PrivacyParams(1.0), params, RngStream(1)),
                  std::invalid_argument);
}
