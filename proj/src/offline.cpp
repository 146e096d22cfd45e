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

#include "klpref/offline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "klpref/instances.hpp"

namespace klpref::offline {

namespace {

constexpr double kVarianceFloor = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Fixed multiplier grid searched by calibration, smallest first.
constexpr double kMultiplierGrid[] = {0.0,    1.0 / 256, 1.0 / 128, 1.0 / 64, 1.0 / 32,
                                      1.0 / 16, 1.0 / 8,   1.0 / 4,   1.0 / 2,  1.0,
                                      2.0,      4.0,       8.0};

void check_alpha(double alpha) {
  if (!(alpha > 0.5 && alpha <= 1.0)) {
    throw std::invalid_argument("alpha must lie in (0.5, 1]");
  }
}

}  // namespace

double log_likelihood(const RewardTable& r, std::span<const PrivateSample> data, double alpha) {
  double total = 0.0;
  for (const auto& rec : data) {
    total += std::log(private_label_prob(r, rec.z, rec.s, rec.a1, rec.a2, alpha));
  }
  return total;
}

std::pair<int, RewardTable> private_mle(const FunctionClass& fclass,
                                        std::span<const PrivateSample> data, double alpha) {
  check_alpha(alpha);
  if (fclass.size() == 0) throw std::invalid_argument("private_mle: empty class");
  if (data.empty() && fclass.size() > 1) {
    throw std::invalid_argument("private_mle: empty data with a non-singleton class");
  }
  int best = 0;
  double best_ll = -kInf;
  for (size_t i = 0; i < fclass.size(); ++i) {
    const double ll = log_likelihood(fclass[i], data, alpha);
    if (ll > best_ll) {
      best_ll = ll;
      best = static_cast<int>(i);
    }
  }
  return {best, fclass[best]};
}

Grid d_divergence_sq_table(const FunctionClass& fclass, const PolicyTable& pi,
                           const StateDistribution& d0) {
  if (fclass.size() == 0) throw std::invalid_argument("d_divergence_sq: empty class");
  const size_t S = pi.states();
  const size_t A = pi.actions();
  Grid table(S, A, 0.0);
  std::vector<double> row_mean(S);
  // Ordered pairs share the (s,a)-independent denominator; the ratio is
  // symmetric in (g, h) so unordered enumeration covers the sup.
  for (size_t g = 0; g < fclass.size(); ++g) {
    for (size_t h = g + 1; h < fclass.size(); ++h) {
      double denom = 0.0;
      for (size_t s = 0; s < S; ++s) {
        double mean = 0.0, mean_sq = 0.0;
        for (size_t a = 0; a < A; ++a) {
          const double diff = fclass[g](s, a) - fclass[h](s, a);
          mean += pi(s, a) * diff;
          mean_sq += pi(s, a) * diff * diff;
        }
        row_mean[s] = mean;
        denom += d0(s) * std::max(0.0, mean_sq - mean * mean);
      }
      for (size_t s = 0; s < S; ++s) {
        for (size_t a = 0; a < A; ++a) {
          const double diff = fclass[g](s, a) - fclass[h](s, a);
          const double num = (diff - row_mean[s]) * (diff - row_mean[s]);
          double ratio;
          if (denom < kVarianceFloor) {
            ratio = num < kVarianceFloor ? 0.0 : kInf;
          } else {
            ratio = num / denom;
          }
          table(s, a) = std::max(table(s, a), ratio);
        }
      }
    }
  }
  return table;
}

double d_divergence_sq(const FunctionClass& fclass, size_t s, size_t a, const PolicyTable& pi,
                       const StateDistribution& d0) {
  return d_divergence_sq_table(fclass, pi, d0)(s, a);
}

double pessimism_bonus(double d_sq, double alpha, size_t n, size_t n_class, double delta,
                       double c_bonus, double tau, double bound, double cap) {
  check_alpha(alpha);
  if (n == 0) throw std::invalid_argument("pessimism_bonus: n must be at least 1");
  if (n_class == 0) throw std::invalid_argument("pessimism_bonus: empty class");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("pessimism_bonus: delta not in (0,1)");
  if (std::isinf(d_sq)) return cap > 0.0 ? cap : 2.0 * bound;
  const double shrink = 2.0 * alpha - 1.0;
  const double scale = c_bonus * std::exp(bound) / (shrink * shrink);
  const double rate = std::log(static_cast<double>(n_class) / delta) / static_cast<double>(n) + tau;
  return std::sqrt(d_sq * scale * rate);
}

namespace {

Grid theory_bonus_table(const Instance& inst, const Grid& d_sq, size_t n, double alpha,
                        const Params& params) {
  Grid gamma(d_sq.states(), d_sq.actions(), 0.0);
  for (size_t s = 0; s < d_sq.states(); ++s) {
    for (size_t a = 0; a < d_sq.actions(); ++a) {
      gamma(s, a) = pessimism_bonus(d_sq(s, a), alpha, n, inst.fclass.size(), params.delta,
                                    params.c_bonus, params.tau, inst.bound(), params.bonus_cap);
    }
  }
  return gamma;
}

}  // namespace

double calibrate_bonus_multiplier(const Instance& inst, size_t n, const PrivacyParams& pp,
                                  const Params& params) {
  if (n == 0) throw std::invalid_argument("calibrate_bonus_multiplier: n must be at least 1");
  if (params.calib_replays < 1) {
    throw std::invalid_argument("calibrate_bonus_multiplier: need at least one replay");
  }
  const Grid d_sq = d_divergence_sq_table(inst.fclass, inst.pi_ref, inst.d0);
  const Grid gamma = theory_bonus_table(inst, d_sq, n, pp.alpha(), params);
  const size_t S = inst.states();
  const size_t A = inst.actions();

  const RngStream root(params.calib_seed);
  std::vector<double> needed;
  needed.reserve(params.calib_replays);
  for (int rep = 0; rep < params.calib_replays; ++rep) {
    RngStream stream = root.split(static_cast<uint64_t>(rep));
    const auto data = offline_dataset_gen(inst, n, pp, stream);
    const auto [idx, r_bar] = private_mle(inst.fclass, data, pp.alpha());
    double m_rep = 0.0;
    for (size_t s = 0; s < S; ++s) {
      double bias = 0.0;
      for (size_t a = 0; a < A; ++a) bias += inst.pi_ref(s, a) * (r_bar(s, a) - inst.r_star(s, a));
      for (size_t a = 0; a < A; ++a) {
        const double err = r_bar(s, a) - bias - inst.r_star(s, a);
        if (err <= 0.0) continue;
        m_rep = std::max(m_rep, gamma(s, a) > 0.0 ? err / gamma(s, a) : kInf);
      }
    }
    needed.push_back(m_rep);
  }
  std::sort(needed.begin(), needed.end());
  const size_t k = static_cast<size_t>(
      std::ceil((1.0 - params.delta) * static_cast<double>(params.calib_replays)));
  const double quantile = needed[std::min(needed.size() - 1, k == 0 ? 0 : k - 1)];
  for (double m : kMultiplierGrid) {
    if (m >= quantile) return m;
  }
  return kMultiplierGrid[std::size(kMultiplierGrid) - 1];
}

Fit fit(const Instance& inst, std::span<const PrivateSample> data, const PrivacyParams& pp,
        const Params& params) {
  const double alpha = pp.alpha();
  const size_t n = data.size();
  if (n == 0 && inst.fclass.size() > 1) {
    throw std::invalid_argument("offline fit: empty data with a non-singleton class");
  }

  Fit out;
  out.log_liks.resize(inst.fclass.size());
  for (size_t i = 0; i < inst.fclass.size(); ++i) {
    out.log_liks[i] = log_likelihood(inst.fclass[i], data, alpha);
  }
  out.mle_index = static_cast<int>(
      std::max_element(out.log_liks.begin(), out.log_liks.end()) - out.log_liks.begin());
  out.r_bar = inst.fclass[out.mle_index];

  out.d_sq = d_divergence_sq_table(inst.fclass, inst.pi_ref, inst.d0);
  out.d_pi_star_sq = single_policy_d_sq(inst);

  if (params.bonus_mode == BonusMode::kCalibrated) {
    if (params.bonus_multiplier) {
      out.bonus_multiplier = *params.bonus_multiplier;
    } else if (n > 0) {
      out.bonus_multiplier = calibrate_bonus_multiplier(inst, n, pp, params);
    }
  }

  if (n == 0) {
    out.gamma = Grid(inst.states(), inst.actions(), 0.0);
  } else {
    out.gamma = theory_bonus_table(inst, out.d_sq, n, alpha, params);
    if (out.bonus_multiplier != 1.0) {
      for (double& g : out.gamma.data()) g *= out.bonus_multiplier;
    }
  }

  out.r_hat = out.r_bar.values;
  for (size_t i = 0; i < out.r_hat.size(); ++i) out.r_hat.data()[i] -= out.gamma.data()[i];
  out.pi_hat = gibbs_policy(out.r_hat, inst.pi_ref, inst.beta);
  return out;
}

}  // namespace klpref::offline
