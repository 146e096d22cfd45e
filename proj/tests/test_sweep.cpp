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

#include "klpref/sweep.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "klpref/invariants.hpp"
#include "klpref/io.hpp"

using namespace klpref;

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  REQUIRE(is);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config parsing") {
  const std::string text = R"(
# comment
[instance]
type = hard
states = 4
skew = 4
gap = 0.35
beta = 1
bound = 2
signs = +-+-

[privacy]
epsilon = 1

[offline]
delta = 0.1
c_bonus = 0.25
bonus_mode = calibrated
calib_replays = 100

[online]
delta = 0.1
lambda = 1
checkpoints = 500,2000

[sweep]
n = 1024,256
epsilon = 2,0.5
T = 2000
seeds = 0..19
threads = 2
)";
  std::istringstream is(text);
  const auto cfg = sweep::parse_config(is);
  CHECK(cfg.instance.hard.states == 4);
  CHECK(cfg.instance.hard.signs == std::vector<int>{1, -1, 1, -1});
  CHECK(cfg.offline_params.bonus_mode == offline::BonusMode::kCalibrated);
  CHECK(cfg.offline_params.c_bonus == 0.25);
  CHECK(cfg.online_params.lambda == 1.0);
  CHECK(cfg.n_grid == std::vector<size_t>{256, 1024});     // sorted
  CHECK(cfg.eps_grid == std::vector<double>{0.5, 2.0});    // sorted
  CHECK(cfg.seed_lo == 0);
  CHECK(cfg.seed_hi == 19);
  CHECK(cfg.threads == 2);

  std::istringstream bad_key("[sweep]\nunknown = 1\n");
  CHECK_THROWS_AS(sweep::parse_config(bad_key), sweep::ConfigError);
  std::istringstream bad_section("[nope]\nx = 1\n");
  CHECK_THROWS_AS(sweep::parse_config(bad_section), sweep::ConfigError);
  std::istringstream stray("x = 1\n");
  CHECK_THROWS_AS(sweep::parse_config(stray), sweep::ConfigError);
}

TEST_CASE("config validation raises distinct errors") {
  std::string delta_msg, eps_msg, lambda_msg;
  {
    sweep::Config cfg;
    cfg.mode = sweep::Mode::kOffline;
    cfg.n_grid = {64};
    cfg.offline_params.delta = 0.0;
    try {
      sweep::validate(cfg);
    } catch (const sweep::ConfigError& e) {
      delta_msg = e.what();
    }
  }
  {
    sweep::Config cfg;
    cfg.mode = sweep::Mode::kOffline;
    cfg.n_grid = {64};
    cfg.eps_grid = {0.0};
    try {
      sweep::validate(cfg);
    } catch (const sweep::ConfigError& e) {
      eps_msg = e.what();
    }
  }
  {
    sweep::Config cfg;
    cfg.mode = sweep::Mode::kOnline;
    cfg.instance.hard = invariants::offline_bench_spec();
    cfg.t_grid = {10};
    cfg.online_params.lambda = 1e12;
    try {
      sweep::validate(cfg);
    } catch (const sweep::ConfigError& e) {
      lambda_msg = e.what();
    }
  }
  CHECK(!delta_msg.empty());
  CHECK(!eps_msg.empty());
  CHECK(!lambda_msg.empty());
  CHECK(delta_msg != eps_msg);
  CHECK(delta_msg != lambda_msg);
  CHECK(eps_msg != lambda_msg);
}

TEST_CASE("slope fitting recovers exact power laws") {
  std::vector<double> xs, ys;
  for (size_t n = 256; n <= 16384; n *= 2) {
    xs.push_back(static_cast<double>(n));
    ys.push_back(7.0 / static_cast<double>(n));
  }
  const auto fit = sweep::fit_loglog_slope(xs, ys);
  CHECK(std::fabs(fit.slope + 1.0) <= 1e-9);
  CHECK(fit.std_error <= 1e-9);
  CHECK(fit.points == xs.size());

  const std::vector<double> one_x = {10.0};
  const std::vector<double> one_y = {3.0};
  CHECK(sweep::fit_loglog_slope(one_x, one_y).points == 1);
}

TEST_CASE("regret over log on an injected logarithmic curve") {
  std::vector<double> cum(4096);
  for (size_t t = 1; t <= cum.size(); ++t) cum[t - 1] = 5.0 * std::log(static_cast<double>(t));
  const std::vector<int64_t> checkpoints = {16, 128, 1024, 4096};
  for (double v : sweep::regret_over_log(cum, checkpoints)) {
    CHECK(std::fabs(v - 5.0) <= 1e-9);
  }
  const std::vector<int64_t> bad = {8192};
  CHECK_THROWS_AS(sweep::regret_over_log(cum, bad), std::invalid_argument);
}

TEST_CASE("tiny offline sweep produces one row and no slope") {
  sweep::Config cfg;
  cfg.mode = sweep::Mode::kOffline;
  cfg.instance.hard = invariants::offline_bench_spec();
  cfg.n_grid = {128};
  cfg.eps_grid = {1.0};
  cfg.seed_lo = cfg.seed_hi = 3;
  const auto summary = sweep::run_offline_sweep(cfg);
  REQUIRE(summary.cells.size() == 1);
  CHECK(summary.cells[0].replays == 1);
  CHECK(summary.cells[0].mean_subopt == summary.cells[0].median_subopt);
  CHECK(summary.cells[0].std_subopt == 0.0);
  CHECK(summary.slopes.empty());
}

TEST_CASE("offline sweep emission round-trips and stays deterministic") {
  sweep::Config cfg;
  cfg.mode = sweep::Mode::kOffline;
  cfg.instance.hard = invariants::offline_bench_spec();
  cfg.n_grid = {64, 128};
  cfg.eps_grid = {1.0};
  cfg.seed_lo = 0;
  cfg.seed_hi = 2;
  cfg.threads = 3;

  const auto base = std::filesystem::temp_directory_path() / "klpref-test-sweep";
  std::filesystem::remove_all(base);
  const auto summary = sweep::run_offline_sweep(cfg);
  sweep::emit_offline_outputs(summary, cfg, (base / "one").string());
  const auto again = sweep::run_offline_sweep(cfg);
  sweep::emit_offline_outputs(again, cfg, (base / "two").string());

  for (const auto& entry : std::filesystem::directory_iterator(base / "one")) {
    CHECK(read_file(entry.path()) == read_file(base / "two" / entry.path().filename()));
  }

  // Round trip of the summary values at full precision.
  std::ifstream is(base / "one" / "summary.csv");
  const auto cells = sweep::parse_offline_summary_csv(is);
  REQUIRE(cells.size() == summary.cells.size());
  for (size_t i = 0; i < cells.size(); ++i) {
    CHECK(cells[i].epsilon == summary.cells[i].epsilon);
    CHECK(cells[i].n == summary.cells[i].n);
    CHECK(cells[i].mean_subopt == summary.cells[i].mean_subopt);
    CHECK(cells[i].median_subopt == summary.cells[i].median_subopt);
    CHECK(cells[i].std_subopt == summary.cells[i].std_subopt);
  }

  // The footer carries the config hash and the seed range.
  const std::string text = read_file(base / "one" / "summary.csv");
  CHECK(text.find("# config_hash=") != std::string::npos);
  CHECK(text.find("seeds=0..2") != std::string::npos);
  std::filesystem::remove_all(base);
}

TEST_CASE("empty summary emits header plus footer only") {
  sweep::Config cfg;
  cfg.mode = sweep::Mode::kOffline;
  cfg.n_grid = {64};
  const auto base = std::filesystem::temp_directory_path() / "klpref-test-empty";
  std::filesystem::remove_all(base);
  sweep::emit_offline_outputs(sweep::OfflineSummary{}, cfg, base.string());
  std::istringstream is(read_file(base / "summary.csv"));
  std::string line;
  int lines = 0;
  while (std::getline(is, line)) ++lines;
  CHECK(lines == 2);
  std::filesystem::remove_all(base);
}

TEST_CASE("online sweep summarizes regret and checkpoints") {
  sweep::Config cfg;
  cfg.mode = sweep::Mode::kOnline;
  cfg.instance.hard = invariants::online_bench_spec();
  cfg.t_grid = {40};
  cfg.eps_grid = {1.0};
  cfg.online_params.lambda = 1.0;
  cfg.checkpoints = {20, 40};
  cfg.seed_lo = 0;
  cfg.seed_hi = 1;
  const auto summary = sweep::run_online_sweep(cfg);
  REQUIRE(summary.cells.size() == 1);
  CHECK(summary.cells[0].replays == 2);
  REQUIRE(summary.checkpoints.size() == 2);
  CHECK(summary.checkpoints[0].checkpoint == 20);
  CHECK(summary.checkpoints[1].checkpoint == 40);
  CHECK(summary.checkpoints[1].mean_cum_regret >= summary.checkpoints[0].mean_cum_regret);

  // T = 1: the single round plays the reference policy on both arms.
  sweep::Config tiny = cfg;
  tiny.t_grid = {1};
  tiny.checkpoints = {};
  tiny.seed_hi = 0;
  const auto one = sweep::run_online_sweep(tiny);
  const Instance inst = sweep::make_instance(tiny.instance, 1.0, 0);
  const PolicyTable pi_star = gibbs_policy(inst.r_star, inst.pi_ref, inst.beta);
  const double expect = objective_value(pi_star, inst) - objective_value(inst.pi_ref, inst);
  CHECK(one.cells[0].mean_cum_regret == doctest::Approx(expect).epsilon(1e-12));

  const auto base = std::filesystem::temp_directory_path() / "klpref-test-online";
  std::filesystem::remove_all(base);
  sweep::emit_online_outputs(summary, cfg, base.string());
  CHECK(std::filesystem::exists(base / "summary.csv"));
  CHECK(std::filesystem::exists(base / "checkpoints.csv"));
  CHECK(std::filesystem::exists(base / "trace_eps1_T40_seed0.csv"));
  CHECK(std::filesystem::exists(base / "trace_eps1_T40_seed1.csv"));
  CHECK(std::filesystem::exists(base / "plot_regret_eps1_T40.csv"));
  std::filesystem::remove_all(base);
}

TEST_CASE("canonical config text distinguishes semantic changes") {
  sweep::Config a;
  a.n_grid = {64};
  sweep::Config b = a;
  CHECK(sweep::config_hash(a) == sweep::config_hash(b));
  b.offline_params.c_bonus = 0.5;
  CHECK(sweep::config_hash(a) != sweep::config_hash(b));
  b = a;
  b.seed_hi = 7;
  CHECK(sweep::config_hash(a) != sweep::config_hash(b));
}
