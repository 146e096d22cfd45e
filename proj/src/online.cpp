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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace klpref::online {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.5 && alpha <= 1.0)) {
    throw std::invalid_argument("alpha must lie in (0.5, 1]");
  }
}

double member_delta(const RewardTable& r, const PrivateSample& rec) {
  return r(rec.s, rec.a1) - r(rec.s, rec.a2);
}

}  // namespace

double confidence_radius(double bound, int64_t horizon, size_t n_class, double delta,
                         double alpha, double gamma_scale) {
  check_alpha(alpha);
  if (horizon < 1) throw std::invalid_argument("confidence_radius: horizon must be at least 1");
  if (n_class < 1) throw std::invalid_argument("confidence_radius: empty class");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("confidence_radius: delta not in (0,1)");
  }
  if (!(gamma_scale > 0.0)) throw std::invalid_argument("confidence_radius: scale must be positive");
  const double kappa = 4.0 * (std::exp(-bound) + 2.0 + std::exp(bound));
  const double log_term =
      std::log(static_cast<double>(horizon) * static_cast<double>(n_class) / delta);
  return gamma_scale * kappa * std::sqrt(log_term) / (2.0 * alpha - 1.0);
}

std::pair<int, RewardTable> private_least_squares(const FunctionClass& fclass,
                                                  std::span<const PrivateSample> data,
                                                  double alpha) {
  check_alpha(alpha);
  if (fclass.size() == 0) throw std::invalid_argument("private_least_squares: empty class");
  int best = 0;
  double best_loss = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < fclass.size(); ++i) {
    double loss = 0.0;
    for (const auto& rec : data) {
      const double resid = debiased_mean(alpha, member_delta(fclass[i], rec)) - rec.z;
      loss += resid * resid;
    }
    if (loss < best_loss) {
      best_loss = loss;
      best = static_cast<int>(i);
    }
  }
  return {best, fclass[best]};
}

std::vector<int> confidence_set(const FunctionClass& fclass, const RewardTable& r_bar,
                                std::span<const PrivateSample> data, double lambda,
                                double gamma_t) {
  std::vector<int> members;
  for (size_t i = 0; i < fclass.size(); ++i) {
    double gap_sq = 0.0;
    for (const auto& rec : data) {
      const double d = member_delta(fclass[i], rec) - member_delta(r_bar, rec);
      gap_sq += d * d;
    }
    if (gap_sq + lambda <= gamma_t * gamma_t) members.push_back(static_cast<int>(i));
  }
  return members;
}

double uncertainty(std::span<const int> members, const FunctionClass& fclass, double lambda,
                   size_t s, size_t a, std::span<const PrivateSample> data,
                   const PolicyTable& pi) {
  if (!(lambda > 0.0)) throw std::invalid_argument("uncertainty: lambda must be positive");
  if (members.empty()) throw std::invalid_argument("uncertainty: empty member set");
  double worst = 0.0;
  for (size_t gi = 0; gi < members.size(); ++gi) {
    for (size_t hi = gi + 1; hi < members.size(); ++hi) {
      const RewardTable& r1 = fclass[members[gi]];
      const RewardTable& r2 = fclass[members[hi]];
      double gap_sq = 0.0;
      for (const auto& rec : data) {
        const double d = member_delta(r1, rec) - member_delta(r2, rec);
        gap_sq += d * d;
      }
      double centered = r1(s, a) - r2(s, a);
      for (size_t b = 0; b < pi.actions(); ++b) {
        centered -= pi(s, b) * (r1(s, b) - r2(s, b));
      }
      worst = std::max(worst, std::fabs(centered) / std::sqrt(lambda + gap_sq));
    }
  }
  return worst;
}

double exploration_bonus(double gamma_t, double u) {
  if (!(u >= 0.0)) throw std::invalid_argument("exploration_bonus: uncertainty must be >= 0");
  return std::min(1.0, gamma_t * u);
}

double RunTrace::cum_regret_pi2(int64_t upto) const {
  double total = 0.0;
  for (const auto& st : steps) {
    if (st.t > upto) break;
    total += st.regret_pi2;
  }
  return total;
}

RunTrace run(const Instance& inst, const PrivacyParams& pp, const Params& params, RngStream rng) {
  const size_t S = inst.states();
  const size_t A = inst.actions();
  const size_t N = inst.fclass.size();
  const double alpha = pp.alpha();
  const int64_t T = params.horizon;
  if (T < 1) throw std::invalid_argument("online run: horizon must be at least 1");

  const double gamma_t =
      confidence_radius(inst.bound(), T, N, params.delta, alpha, params.gamma_scale);
  const double lambda = params.lambda > 0.0 ? params.lambda : gamma_t * gamma_t / 4.0;
  if (lambda > gamma_t * gamma_t / 2.0) {
    throw std::invalid_argument("online run: lambda exceeds Gamma_T^2/2");
  }

  RunTrace trace;
  trace.stream_key = rng.key();
  trace.epsilon = pp.epsilon();
  trace.gamma_t = gamma_t;
  trace.lambda = lambda;
  trace.gamma_scale = params.gamma_scale;
  trace.delta = params.delta;
  trace.steps.reserve(static_cast<size_t>(T));

  const PolicyTable pi_star = gibbs_policy(inst.r_star, inst.pi_ref, inst.beta);
  const double j_star = objective_value(pi_star, inst);
  const int truth = inst.fclass.index_of(inst.r_star);

  PolicyTable pi1 = inst.pi_ref;
  PolicyTable pi2 = inst.pi_ref;

  // Running pair geometry: gap_sq[i][j] = sum over data of
  // (delta_i - delta_j)^2, grown by one record per round.
  std::vector<std::vector<double>> gap_sq(N, std::vector<double>(N, 0.0));
  std::vector<double> ls_loss(N, 0.0);
  std::vector<double> deltas(N);
  std::vector<int> all_members(N);
  std::iota(all_members.begin(), all_members.end(), 0);

  double cum_min1_u2 = 0.0;
  Grid bonus(S, A);
  std::vector<double> pair_mean(S);

  for (int64_t t = 1; t <= T; ++t) {
    StepRecord st;
    st.t = t;
    st.regret_pi1 = j_star - objective_value(pi1, inst);
    st.regret_pi2 = j_star - objective_value(pi2, inst);

    const size_t s_t = rng.categorical(inst.d0.probs);
    const size_t a1 = rng.categorical(std::span<const double>(&pi1.probs.data()[s_t * A], A));
    const size_t a2 = rng.categorical(std::span<const double>(&pi2.probs.data()[s_t * A], A));
    const int y = sample_preference(rng, inst.r_star, s_t, a1, a2);
    const int z = privatize_label(rng, y, pp);
    st.s = static_cast<int>(s_t);
    st.a1 = static_cast<int>(a1);
    st.a2 = static_cast<int>(a2);
    st.z = z;

    for (size_t i = 0; i < N; ++i) {
      deltas[i] = inst.fclass[i](s_t, a1) - inst.fclass[i](s_t, a2);
      const double resid = debiased_mean(alpha, deltas[i]) - z;
      ls_loss[i] += resid * resid;
    }
    for (size_t i = 0; i < N; ++i) {
      for (size_t j = i + 1; j < N; ++j) {
        const double d = deltas[i] - deltas[j];
        gap_sq[i][j] += d * d;
        gap_sq[j][i] = gap_sq[i][j];
      }
    }

    const int rbar =
        static_cast<int>(std::min_element(ls_loss.begin(), ls_loss.end()) - ls_loss.begin());
    st.rbar_index = rbar;
    const RewardTable& r_bar = inst.fclass[rbar];
    const PolicyTable pi1_next = gibbs_policy(r_bar, inst.pi_ref, inst.beta);

    std::vector<int> fset;
    if (params.restrict_to_confidence_set) {
      for (size_t i = 0; i < N; ++i) {
        if (gap_sq[i][rbar] + lambda <= gamma_t * gamma_t) fset.push_back(static_cast<int>(i));
      }
    } else {
      fset = all_members;
    }
    st.fset_size = static_cast<int>(fset.size());

    // Uncertainty table over the retained pairs, then the capped bonus.
    Grid u_table(S, A, 0.0);
    for (size_t gi = 0; gi < fset.size(); ++gi) {
      for (size_t hi = gi + 1; hi < fset.size(); ++hi) {
        const RewardTable& r1 = inst.fclass[fset[gi]];
        const RewardTable& r2 = inst.fclass[fset[hi]];
        const double denom = std::sqrt(lambda + gap_sq[fset[gi]][fset[hi]]);
        for (size_t s = 0; s < S; ++s) {
          double mean = 0.0;
          for (size_t b = 0; b < A; ++b) mean += pi1_next(s, b) * (r1(s, b) - r2(s, b));
          pair_mean[s] = mean;
        }
        for (size_t s = 0; s < S; ++s) {
          for (size_t a = 0; a < A; ++a) {
            const double num = std::fabs(r1(s, a) - r2(s, a) - pair_mean[s]);
            u_table(s, a) = std::max(u_table(s, a), num / denom);
          }
        }
      }
    }
    double bonus_sum = 0.0, bonus_max = 0.0;
    for (size_t s = 0; s < S; ++s) {
      for (size_t a = 0; a < A; ++a) {
        bonus(s, a) = exploration_bonus(gamma_t, u_table(s, a));
        bonus_sum += bonus(s, a);
        bonus_max = std::max(bonus_max, bonus(s, a));
      }
    }
    st.bonus_max = bonus_max;
    st.bonus_mean = bonus_sum / static_cast<double>(S * A);

    const PolicyTable pi2_next = gibbs_policy(bonus, pi1_next, inst.beta);

    st.u_played = u_table(s_t, a2);
    cum_min1_u2 += std::min(1.0, st.u_played * st.u_played);
    st.cum_min1_u2 = cum_min1_u2;

    if (truth >= 0) {
      st.insample_sq_true = gap_sq[truth][rbar];
      bool ok = true;
      for (size_t s = 0; s < S && ok; ++s) {
        double c_t = 0.0;
        for (size_t b = 0; b < A; ++b) {
          c_t += pi1_next(s, b) * (inst.r_star(s, b) - r_bar(s, b));
        }
        for (size_t a = 0; a < A; ++a) {
          if (r_bar(s, a) + bonus(s, a) + c_t - inst.r_star(s, a) < -1e-12) {
            ok = false;
            break;
          }
        }
      }
      st.optimism_ok = ok;
    } else {
      st.insample_sq_true = std::numeric_limits<double>::quiet_NaN();
      st.optimism_ok = true;
    }

    trace.steps.push_back(st);
    pi1 = pi1_next;
    pi2 = pi2_next;
  }
  return trace;
}

}  // namespace klpref::online
