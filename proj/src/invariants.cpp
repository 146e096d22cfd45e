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

#include "klpref/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include "klpref/io.hpp"
#include "klpref/offline.hpp"
#include "klpref/online.hpp"
#include "klpref/sweep.hpp"

namespace klpref::invariants {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

PolicyTable random_policy(RngStream& rng, size_t states, size_t actions) {
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

PolicyTable mix_policies(const PolicyTable& p, const PolicyTable& q, double w) {
  Grid probs(p.states(), p.actions());
  for (size_t s = 0; s < p.states(); ++s) {
    for (size_t a = 0; a < p.actions(); ++a) {
      probs(s, a) = (1.0 - w) * p(s, a) + w * q(s, a);
    }
  }
  return PolicyTable(std::move(probs));
}

CheckResult ldp_ratio_exact() {
  double worst = 0.0;
  for (double eps : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    const PrivacyParams pp(eps);
    const double hi = std::max(pp.alpha(), pp.flip_prob());
    const double lo = std::min(pp.alpha(), pp.flip_prob());
    worst = std::max(worst, std::fabs(hi / lo - std::exp(eps)));
  }
  return {"ldp-ratio-exact", worst <= 1e-12, worst, 1e-12,
          "max |alpha/(1-alpha) - e^eps| over the epsilon grid"};
}

CheckResult channel_mean_monte_carlo() {
  const size_t draws = 1000000;
  const std::pair<double, double> pairs[] = {
      {0.0, 1.0}, {0.3, 1.0}, {-0.8, 0.5}, {1.5, 2.0}, {2.0, std::log(3.0)}};
  double worst_z = 0.0;
  RngStream rng(411);
  for (const auto& [delta, eps] : pairs) {
    const PrivacyParams pp(eps);
    const double p_plus = sigmoid(delta);
    double sum = 0.0;
    RngStream stream = rng.split(static_cast<uint64_t>(delta * 1000 + eps * 7));
    for (size_t i = 0; i < draws; ++i) {
      const int y = stream.bernoulli(p_plus) ? 1 : -1;
      sum += privatize_label(stream, y, pp);
    }
    const double emp = sum / static_cast<double>(draws);
    const double expect = debiased_mean(pp.alpha(), delta);
    const double se = std::sqrt(std::max(1e-12, 1.0 - expect * expect) /
                                static_cast<double>(draws));
    worst_z = std::max(worst_z, std::fabs(emp - expect) / se);
  }
  return {"channel-mean-monte-carlo", worst_z <= 3.0, worst_z, 3.0,
          "max |empirical - (2a-1)(2sigma(d)-1)| in standard errors, 1e6 draws per pair"};
}

CheckResult gibbs_optimality() {
  RngStream rng(7);
  Instance inst = random_instance(3, 4, 4, 2.0, 1.5, rng);
  const PolicyTable pi_star = gibbs_policy(inst.r_star, inst.pi_ref, inst.beta);
  const double j_star = objective_value(pi_star, inst);
  double worst = -kInf;
  for (int i = 0; i < 1000; ++i) {
    PolicyTable pi = i % 2 ? random_policy(rng, inst.states(), inst.actions())
                           : mix_policies(pi_star, random_policy(rng, inst.states(),
                                                                 inst.actions()),
                                          0.01 + 0.5 * rng.next_double());
    worst = std::max(worst, objective_value(pi, inst) - j_star);
  }
  return {"gibbs-optimality", worst <= 1e-12, worst, 1e-12,
          "max J(pi) - J(pi*) over 1000 random and perturbed policies"};
}

CheckResult subopt_kl_identity() {
  RngStream rng(11);
  double worst = 0.0;
  for (int k = 0; k < 5; ++k) {
    RngStream inst_rng = rng.split(k);
    Instance inst = random_instance(2 + k % 3, 2 + k % 2, 3, 1.5, 0.5 + k, inst_rng);
    const PolicyTable pi_star = gibbs_policy(inst.r_star, inst.pi_ref, inst.beta);
    for (int i = 0; i < 100; ++i) {
      const PolicyTable pi = random_policy(inst_rng, inst.states(), inst.actions());
      const double direct = suboptimality(pi, inst);
      const double via_kl = expected_kl(pi, pi_star, inst.d0) / inst.beta;
      worst = std::max(worst, std::fabs(direct - via_kl));
    }
  }
  return {"subopt-kl-identity", worst <= 1e-9, worst, 1e-9,
          "max |SubOpt(pi) - KL(pi||pi*)/beta| over 500 policy/instance draws"};
}

CheckResult gibbs_bias_invariance() {
  RngStream rng(13);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const size_t S = 2 + i % 4;
    const size_t A = 2 + i % 3;
    const double B = 2.0;
    Grid r(S, A);
    for (double& v : r.data()) v = B * rng.next_double();
    Grid shifted = r;
    for (size_t s = 0; s < S; ++s) {
      const double bias = B * (2.0 * rng.next_double() - 1.0);
      for (size_t a = 0; a < A; ++a) shifted(s, a) -= bias;
    }
    const PolicyTable ref = random_policy(rng, S, A);
    const double beta = 0.25 + 3.0 * rng.next_double();
    worst = std::max(worst, gibbs_policy(r, ref, beta)
                                .probs.max_abs_diff(gibbs_policy(shifted, ref, beta).probs));
  }
  return {"gibbs-bias-invariance", worst <= 1e-12, worst, 1e-12,
          "max entrywise |gibbs(r) - gibbs(r - b)| over 100 random pairs"};
}

CheckResult private_label_prob_consistency() {
  RngStream rng(17);
  Instance inst = random_instance(3, 3, 2, 2.0, 1.0, rng);
  double worst = 0.0;
  for (double eps : {0.3, 1.0, 2.5}) {
    const PrivacyParams pp(eps);
    for (size_t s = 0; s < inst.states(); ++s) {
      for (size_t a1 = 0; a1 < inst.actions(); ++a1) {
        for (size_t a2 = 0; a2 < inst.actions(); ++a2) {
          const double p_keep = bt_preference_prob(inst.r_star, s, a1, a2);
          double total = 0.0;
          for (int z : {-1, 1}) {
            const double lhs = private_label_prob(inst.r_star, z, s, a1, a2, pp.alpha());
            const double p_y_eq_z = z == 1 ? p_keep : 1.0 - p_keep;
            const double rhs = pp.alpha() * p_y_eq_z + pp.flip_prob() * (1.0 - p_y_eq_z);
            worst = std::max(worst, std::fabs(lhs - rhs));
            total += lhs;
          }
          worst = std::max(worst, std::fabs(total - 1.0));
        }
      }
    }
  }
  return {"private-label-prob-consistency", worst <= 1e-15, worst, 1e-15,
          "channel composition and total probability of the private label law"};
}

CheckResult mle_likelihood_dominance() {
  const Instance inst = hard_instance(offline_bench_spec());
  const PrivacyParams pp(1.0);
  RngStream rng(23);
  double worst = -kInf;
  for (int rep = 0; rep < 10; ++rep) {
    RngStream stream = rng.split(rep);
    const auto data = offline_dataset_gen(inst, 512, pp, stream);
    const auto [idx, r_bar] = offline::private_mle(inst.fclass, data, pp.alpha());
    const double best = offline::log_likelihood(r_bar, data, pp.alpha());
    for (size_t i = 0; i < inst.fclass.size(); ++i) {
      worst = std::max(worst, offline::log_likelihood(inst.fclass[i], data, pp.alpha()) - best);
    }
  }
  return {"mle-likelihood-dominance", worst <= 0.0, worst, 0.0,
          "max log-likelihood advantage of any member over the returned MLE"};
}

CheckResult pessimism_coverage_theory() {
  const Instance inst = hard_instance(offline_bench_spec());
  const PrivacyParams pp(1.0);
  offline::Params params;  // theory mode, c = 16
  const size_t n = 4096;
  const int replays = 200;
  int failures = 0;
  for (int rep = 0; rep < replays; ++rep) {
    RngStream stream = RngStream(29).split(rep);
    const auto data = offline_dataset_gen(inst, n, pp, stream);
    const auto fit = offline::fit(inst, data, pp, params);
    bool ok = true;
    for (size_t s = 0; s < inst.states() && ok; ++s) {
      double bias = 0.0;
      for (size_t a = 0; a < inst.actions(); ++a) {
        bias += inst.pi_ref(s, a) * (fit.r_bar(s, a) - inst.r_star(s, a));
      }
      for (size_t a = 0; a < inst.actions(); ++a) {
        if (fit.r_bar(s, a) - bias - inst.r_star(s, a) > fit.gamma(s, a)) {
          ok = false;
          break;
        }
      }
    }
    failures += ok ? 0 : 1;
  }
  const double frac = static_cast<double>(failures) / replays;
  return {"pessimism-coverage-theory", frac <= 0.15, frac, 0.15,
          "fraction of 200 replays (n=4096, eps=1) violating the one-sided bonus event"};
}

CheckResult onpolicy_error_slope() {
  const Instance inst = hard_instance(offline_bench_spec());
  const PrivacyParams pp(1.0);
  const size_t n_grid[] = {256, 512, 1024, 2048, 4096, 8192, 16384};
  const int seeds = 20;
  std::vector<double> xs, ys;
  for (size_t n : n_grid) {
    double total = 0.0;
    for (int seed = 0; seed < seeds; ++seed) {
      RngStream stream = RngStream(31).split(n * 100 + seed);
      const auto data = offline_dataset_gen(inst, n, pp, stream);
      const auto [idx, r_bar] = offline::private_mle(inst.fclass, data, pp.alpha());
      double err = 0.0;
      for (size_t s = 0; s < inst.states(); ++s) {
        double bias = 0.0;
        for (size_t a = 0; a < inst.actions(); ++a) {
          bias += inst.pi_ref(s, a) * (r_bar(s, a) - inst.r_star(s, a));
        }
        for (size_t a = 0; a < inst.actions(); ++a) {
          const double d = r_bar(s, a) - inst.r_star(s, a) - bias;
          err += inst.d0(s) * inst.pi_ref(s, a) * d * d;
        }
      }
      total += err;
    }
    xs.push_back(static_cast<double>(n));
    ys.push_back(total / seeds);
  }
  const auto fit = sweep::fit_loglog_slope(xs, ys);
  const bool ok = fit.slope >= -1.3 && fit.slope <= -0.7;
  return {"onpolicy-error-slope", ok, fit.slope, -1.0,
          "log-log slope of the centered on-policy MLE error over n in {2^8..2^14}, target -1 +/- 0.3"};
}

CheckResult subopt_monotone_epsilon() {
  const Instance inst = hard_instance(offline_bench_spec());
  offline::Params params;
  params.c_bonus = 0.25;
  const size_t n = 4096;
  const int seeds = 50;
  double mean_tight = 0.0, mean_loose = 0.0;
  for (int which = 0; which < 2; ++which) {
    const PrivacyParams pp(which == 0 ? 2.0 : 0.5);
    double total = 0.0;
    for (int seed = 0; seed < seeds; ++seed) {
      RngStream stream = RngStream(37).split(which * 1000 + seed);
      const auto data = offline_dataset_gen(inst, n, pp, stream);
      const auto fit = offline::fit(inst, data, pp, params);
      total += suboptimality(fit.pi_hat, inst);
    }
    (which == 0 ? mean_tight : mean_loose) = total / seeds;
  }
  const double diff = mean_tight - mean_loose;
  std::ostringstream detail;
  detail << "mean SubOpt at eps=2 (" << io::fmt(mean_tight) << ") minus eps=0.5 ("
         << io::fmt(mean_loose) << "), 50 seeds at n=4096";
  return {"subopt-monotone-epsilon", diff <= 0.0, diff, 0.0, detail.str()};
}

struct OnlineBatch {
  std::vector<online::RunTrace> traces;
};

OnlineBatch run_online_batch(const Instance& inst, const PrivacyParams& pp,
                             const online::Params& params, uint64_t seed_base, int count) {
  OnlineBatch batch;
  batch.traces.reserve(count);
  for (int seed = 0; seed < count; ++seed) {
    batch.traces.push_back(online::run(inst, pp, params, RngStream(seed_base + seed)));
  }
  return batch;
}

CheckResult online_insample_bound(const OnlineBatch& batch) {
  int hold = 0;
  for (const auto& trace : batch.traces) {
    const double limit = 0.5 * trace.gamma_t * trace.gamma_t;
    bool ok = true;
    for (const auto& st : trace.steps) {
      if (st.insample_sq_true > limit) {
        ok = false;
        break;
      }
    }
    hold += ok ? 1 : 0;
  }
  const double frac = static_cast<double>(hold) / batch.traces.size();
  return {"online-insample-bound", frac >= 0.85, frac, 0.85,
          "fraction of 200 replays (T=500, eps=1) with the uniform in-sample event"};
}

CheckResult optimism_coverage(const OnlineBatch& batch) {
  int hold = 0;
  for (const auto& trace : batch.traces) {
    bool ok = true;
    for (const auto& st : trace.steps) {
      if (!st.optimism_ok) {
        ok = false;
        break;
      }
    }
    hold += ok ? 1 : 0;
  }
  const double frac = static_cast<double>(hold) / batch.traces.size();
  return {"optimism-coverage", frac >= 0.85, frac, 0.85,
          "fraction of replays with r_bar + b_t + c_t >= r* everywhere, all rounds"};
}

CheckResult confidence_set_shrinkage(const OnlineBatch& batch) {
  int worst = 0;
  for (const auto& trace : batch.traces) {
    for (size_t i = 1; i < trace.steps.size(); ++i) {
      worst = std::max(worst, trace.steps[i].fset_size - trace.steps[i - 1].fset_size);
    }
  }
  return {"confidence-set-shrinkage", worst <= 0, static_cast<double>(worst), 0.0,
          "max round-to-round increase of |F_t| across traces"};
}

CheckResult bonus_range(const OnlineBatch& batch) {
  double worst = 0.0;
  for (const auto& trace : batch.traces) {
    for (const auto& st : trace.steps) {
      worst = std::max(worst, st.bonus_max - 1.0);
      worst = std::max(worst, -st.bonus_mean);
    }
  }
  return {"bonus-range", worst <= 0.0, worst, 0.0,
          "max excess of any exploration bonus outside [0, 1]"};
}

CheckResult regret_decile_decay(const OnlineBatch& batch) {
  const size_t T = batch.traces.front().steps.size();
  const size_t decile = T / 10;
  double first = 0.0, last = 0.0;
  for (const auto& trace : batch.traces) {
    for (size_t i = 0; i < decile; ++i) first += trace.steps[i].regret_pi2;
    for (size_t i = T - decile; i < T; ++i) last += trace.steps[i].regret_pi2;
  }
  const double ratio = last / first;
  return {"regret-decile-decay", ratio <= 0.2, ratio, 0.2,
          "last-decile / first-decile mean per-round regret of pi2 at T=2000"};
}

CheckResult cum_uncertainty_sublinear(const OnlineBatch& batch) {
  double at_half = 0.0, at_full = 0.0;
  for (const auto& trace : batch.traces) {
    const size_t T = trace.steps.size();
    at_half += trace.steps[T / 2 - 1].cum_min1_u2;
    at_full += trace.steps[T - 1].cum_min1_u2;
  }
  const double ratio = at_full / at_half;
  return {"cum-uncertainty-sublinear", ratio <= 1.5, ratio, 1.5,
          "sum min(1, U^2) at T=2000 relative to T=1000 (sublinear growth)"};
}

CheckResult hard_optimal_closed_form() {
  HardInstanceSpec spec = offline_bench_spec();
  spec.signs = {1, -1, 1, -1};
  const Instance inst = hard_instance(spec);
  const double b = hard_instance_bias(spec);
  const PolicyTable pi_star = gibbs_policy(inst.r_star, inst.pi_ref, inst.beta);
  double worst = 0.0;
  for (size_t s = 0; s < inst.states(); ++s) {
    const double e = std::exp(spec.beta * (b + spec.signs[s] * spec.gap));
    const double expect0 = e / (e + spec.skew - 1.0);
    worst = std::max(worst, std::fabs(pi_star(s, 0) - expect0));
    worst = std::max(worst, std::fabs(pi_star(s, 1) - (spec.skew - 1.0) / (e + spec.skew - 1.0)));
  }
  return {"hard-optimal-closed-form", worst <= 1e-12, worst, 1e-12,
          "optimal policy against its closed form, entrywise"};
}

CheckResult hard_concentrability() {
  HardInstanceSpec spec = offline_bench_spec();
  double worst = -kInf;
  for (size_t k = 0; k < (size_t{1} << spec.states); ++k) {
    spec.signs.assign(spec.states, 1);
    for (size_t s = 0; s < spec.states; ++s) spec.signs[s] = (k >> s) & 1 ? 1 : -1;
    const Instance inst = hard_instance(spec);
    const PolicyTable pi_star = gibbs_policy(inst.r_star, inst.pi_ref, inst.beta);
    worst = std::max(worst, concentrability(pi_star, inst.pi_ref) - spec.skew);
  }
  return {"hard-concentrability", worst <= 1e-12, worst, 1e-12,
          "max over the sign hypercube of C^{pi*} - C"};
}

CheckResult hard_sign_flip_argmax() {
  HardInstanceSpec spec = offline_bench_spec();
  spec.signs = {1, -1, -1, 1};
  HardInstanceSpec flipped = spec;
  for (int& v : flipped.signs) v = -v;
  const Instance a = hard_instance(spec);
  const Instance b = hard_instance(flipped);
  const PolicyTable pa = gibbs_policy(a.r_star, a.pi_ref, a.beta);
  const PolicyTable pb = gibbs_policy(b.r_star, b.pi_ref, b.beta);
  int bad = 0;
  for (size_t s = 0; s < a.states(); ++s) {
    const int arg_a = pa(s, 0) > pa(s, 1) ? 0 : 1;
    const int arg_b = pb(s, 0) > pb(s, 1) ? 0 : 1;
    if (arg_a == arg_b) ++bad;
  }
  return {"hard-sign-flip-argmax", bad == 0, static_cast<double>(bad), 0.0,
          "states whose favored action fails to invert under v -> -v"};
}

CheckResult dataset_channel_monte_carlo() {
  const Instance inst = hard_instance(offline_bench_spec());
  const PrivacyParams pp(1.0);
  const size_t n = 1000000;
  RngStream rng(41);
  const auto data = offline_dataset_gen(inst, n, pp, rng);
  double emp = 0.0;
  for (const auto& rec : data) emp += rec.z;
  emp /= static_cast<double>(n);
  double expect = 0.0;
  for (size_t s = 0; s < inst.states(); ++s) {
    for (size_t a1 = 0; a1 < inst.actions(); ++a1) {
      for (size_t a2 = 0; a2 < inst.actions(); ++a2) {
        expect += inst.d0(s) * inst.pi_ref(s, a1) * inst.pi_ref(s, a2) *
                  debiased_mean(pp.alpha(), inst.r_star(s, a1) - inst.r_star(s, a2));
      }
    }
  }
  const double se = std::sqrt((1.0 - expect * expect) / static_cast<double>(n));
  const double zscore = std::fabs(emp - expect) / se;
  return {"dataset-channel-monte-carlo", zscore <= 3.0, zscore, 3.0,
          "dataset-wide mean of z against the analytic channel, in standard errors"};
}

CheckResult sweep_determinism() {
  sweep::Config cfg;
  cfg.mode = sweep::Mode::kOffline;
  cfg.instance.kind = sweep::InstanceConfig::Kind::kHard;
  cfg.instance.hard = offline_bench_spec();
  cfg.n_grid = {64, 128};
  cfg.eps_grid = {1.0};
  cfg.seed_lo = 0;
  cfg.seed_hi = 2;
  cfg.threads = 2;
  const auto base = std::filesystem::temp_directory_path() / "klpref-invariant-determinism";
  std::filesystem::remove_all(base);
  const auto dir1 = (base / "a").string();
  const auto dir2 = (base / "b").string();
  for (const auto& dir : {dir1, dir2}) {
    const auto summary = sweep::run_offline_sweep(cfg);
    sweep::emit_offline_outputs(summary, cfg, dir);
  }
  int mismatches = 0;
  int files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir1)) {
    ++files;
    std::ifstream f1(entry.path(), std::ios::binary);
    std::ifstream f2(std::filesystem::path(dir2) / entry.path().filename(), std::ios::binary);
    std::stringstream s1, s2;
    s1 << f1.rdbuf();
    s2 << f2.rdbuf();
    if (!f2 || s1.str() != s2.str()) ++mismatches;
  }
  std::filesystem::remove_all(base);
  return {"sweep-determinism", mismatches == 0 && files > 0, static_cast<double>(mismatches),
          0.0, "byte mismatches between two identically configured sweep emissions"};
}

CheckResult slope_fitter_power_law() {
  std::vector<double> xs, ys;
  for (size_t n = 256; n <= 16384; n *= 2) {
    xs.push_back(static_cast<double>(n));
    ys.push_back(7.0 / static_cast<double>(n));
  }
  const auto fit = sweep::fit_loglog_slope(xs, ys);
  const double err = std::fabs(fit.slope + 1.0);
  return {"slope-fitter-power-law", err <= 1e-9, err, 1e-9,
          "|slope + 1| on the exact law y = 7/n"};
}

CheckResult regret_over_log_synthetic() {
  std::vector<double> cum(2000);
  for (size_t t = 1; t <= cum.size(); ++t) {
    cum[t - 1] = 5.0 * std::log(static_cast<double>(t));
  }
  const int64_t checkpoints[] = {10, 100, 500, 2000};
  double worst = 0.0;
  for (double v : sweep::regret_over_log(cum, checkpoints)) {
    worst = std::max(worst, std::fabs(v - 5.0));
  }
  return {"regret-over-log-synthetic", worst <= 1e-9, worst, 1e-9,
          "Reg(T)/log T on the injected curve 5 log t, all checkpoints"};
}

CheckResult config_validation_errors() {
  std::set<std::string> messages;
  int caught = 0;
  {
    sweep::Config cfg;
    cfg.mode = sweep::Mode::kOffline;
    cfg.n_grid = {64};
    cfg.offline_params.delta = 1.5;
    try {
      sweep::validate(cfg);
    } catch (const sweep::ConfigError& e) {
      ++caught;
      messages.insert(e.what());
    }
  }
  {
    sweep::Config cfg;
    cfg.mode = sweep::Mode::kOffline;
    cfg.n_grid = {64};
    cfg.eps_grid = {-1.0};
    try {
      sweep::validate(cfg);
    } catch (const sweep::ConfigError& e) {
      ++caught;
      messages.insert(e.what());
    }
  }
  {
    sweep::Config cfg;
    cfg.mode = sweep::Mode::kOnline;
    cfg.instance.hard = offline_bench_spec();
    cfg.t_grid = {10};
    cfg.online_params.lambda = 1e12;
    try {
      sweep::validate(cfg);
    } catch (const sweep::ConfigError& e) {
      ++caught;
      messages.insert(e.what());
    }
  }
  const bool ok = caught == 3 && messages.size() == 3;
  return {"config-validation-errors", ok, static_cast<double>(messages.size()), 3.0,
          "three invalid configs rejected with three distinct messages"};
}

}  // namespace

HardInstanceSpec offline_bench_spec() {
  HardInstanceSpec spec;
  spec.states = 4;
  spec.skew = 4.0;
  spec.gap = 0.35;
  spec.beta = 1.0;
  spec.bound = 2.0;
  return spec;
}

HardInstanceSpec online_bench_spec() {
  HardInstanceSpec spec = offline_bench_spec();
  spec.skew = 2.5;
  spec.gap = 0.8;
  return spec;
}

std::vector<CheckResult> run_all() {
  std::vector<CheckResult> results;
  results.push_back(ldp_ratio_exact());
  results.push_back(channel_mean_monte_carlo());
  results.push_back(gibbs_optimality());
  results.push_back(subopt_kl_identity());
  results.push_back(gibbs_bias_invariance());
  results.push_back(private_label_prob_consistency());
  results.push_back(mle_likelihood_dominance());
  results.push_back(pessimism_coverage_theory());
  results.push_back(onpolicy_error_slope());
  results.push_back(subopt_monotone_epsilon());

  {
    const Instance inst = hard_instance(offline_bench_spec());
    online::Params params;
    params.horizon = 500;
    const OnlineBatch batch = run_online_batch(inst, PrivacyParams(1.0), params, 1000, 200);
    results.push_back(online_insample_bound(batch));
    results.push_back(optimism_coverage(batch));
    results.push_back(confidence_set_shrinkage(batch));
    results.push_back(bonus_range(batch));
  }
  {
    const Instance inst = hard_instance(online_bench_spec());
    online::Params params;
    params.horizon = 2000;
    params.lambda = 1.0;
    const OnlineBatch batch = run_online_batch(inst, PrivacyParams(1.0), params, 2000, 20);
    results.push_back(regret_decile_decay(batch));
    results.push_back(cum_uncertainty_sublinear(batch));
  }

  results.push_back(hard_optimal_closed_form());
  results.push_back(hard_concentrability());
  results.push_back(hard_sign_flip_argmax());
  results.push_back(dataset_channel_monte_carlo());
  results.push_back(sweep_determinism());
  results.push_back(slope_fitter_power_law());
  results.push_back(regret_over_log_synthetic());
  results.push_back(config_validation_errors());
  return results;
}

void print_report(std::ostream& os, const std::vector<CheckResult>& results) {
  for (const auto& r : results) {
    os << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << " measured=" << io::fmt(r.measured)
       << " threshold=" << io::fmt(r.threshold) << " (" << r.detail << ")\n";
  }
  size_t passed = 0;
  for (const auto& r : results) passed += r.passed ? 1 : 0;
  os << passed << "/" << results.size() << " checks passed\n";
}

bool all_passed(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CheckResult& r) { return r.passed; });
}

}  // namespace klpref::invariants
