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

#ifndef KLPREF_SWEEP_HPP_
#define KLPREF_SWEEP_HPP_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "klpref/instances.hpp"
#include "klpref/offline.hpp"
#include "klpref/online.hpp"

namespace klpref::sweep {

// Configuration problems map to CLI exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Mode { kOffline, kOnline, kInvariants, kGenInstance };

struct InstanceConfig {
  enum class Kind { kHard, kRandom, kFile };
  Kind kind = Kind::kHard;
  HardInstanceSpec hard;
  // When set, the hard-instance gap is matched to the cell as
  // sqrt(S*C)/((e^eps - 1) sqrt(n)); offline sweeps only.
  bool theory_gap_mode = false;
  size_t rand_states = 3;
  size_t rand_actions = 3;
  size_t rand_class_size = 8;
  double rand_bound = 2.0;
  double rand_beta = 1.0;
  uint64_t rand_seed = 0;
  std::string path;
};

struct Config {
  Mode mode = Mode::kOffline;
  InstanceConfig instance;
  double epsilon = 1.0;  // [privacy] fallback when the sweep grid is empty
  std::vector<size_t> n_grid;
  std::vector<double> eps_grid;
  std::vector<int64_t> t_grid;
  uint64_t seed_lo = 0;
  uint64_t seed_hi = 0;  // inclusive
  offline::Params offline_params;
  online::Params online_params;          // horizon comes from the T grid
  std::vector<int64_t> checkpoints;      // online Reg/log(T) horizons
  std::string out_dir = "out";
  int threads = 1;
};

// INI-style sections [instance] [privacy] [offline] [online] [sweep].
Config parse_config(std::istream& is);
Config parse_config_file(const std::string& path);

// Grid/range checks with distinct messages per violation.
void validate(const Config& cfg);

// The sweep epsilon grid, falling back to the [privacy] value.
std::vector<double> effective_eps_grid(const Config& cfg);

// Deterministic normalized rendering of every semantic field; hashed into
// output footers.
std::string canonical_text(const Config& cfg);
uint64_t config_hash(const Config& cfg);

Instance make_instance(const InstanceConfig& cfg, double epsilon, size_t n);

struct OfflineRun {
  double epsilon = 0.0;
  size_t n = 0;
  uint64_t seed = 0;
  double subopt = 0.0;
  int mle_index = 0;
};

struct OfflineCell {
  double epsilon = 0.0;
  size_t n = 0;
  size_t replays = 0;
  double mean_subopt = 0.0;
  double median_subopt = 0.0;
  double std_subopt = 0.0;
};

struct SlopeFit {
  double slope = 0.0;
  double std_error = 0.0;
  size_t points = 0;
};

struct OfflineSummary {
  std::vector<OfflineCell> cells;                    // (epsilon, n) ascending
  std::vector<OfflineRun> runs;                      // (epsilon, n, seed) ascending
  std::vector<std::pair<double, SlopeFit>> slopes;   // log-log slope per epsilon
};

OfflineSummary run_offline_sweep(const Config& cfg);

struct OnlineRun {
  double epsilon = 0.0;
  int64_t horizon = 0;
  uint64_t seed = 0;
  double cum_regret = 0.0;
  online::RunTrace trace;
};

struct OnlineCell {
  double epsilon = 0.0;
  int64_t horizon = 0;
  size_t replays = 0;
  double mean_cum_regret = 0.0;
  double median_cum_regret = 0.0;
  double std_cum_regret = 0.0;
};

struct CheckpointRow {
  double epsilon = 0.0;
  int64_t horizon = 0;
  int64_t checkpoint = 0;
  double mean_cum_regret = 0.0;
  double reg_over_log = 0.0;
};

struct OnlineSummary {
  std::vector<OnlineCell> cells;
  std::vector<OnlineRun> runs;
  std::vector<CheckpointRow> checkpoints;
};

OnlineSummary run_online_sweep(const Config& cfg);

// summary.csv, slopes.csv / checkpoints.csv, per-run files, and plot-ready
// x/y/error files; every file ends with a footer recording the config hash
// and seed range.
void emit_offline_outputs(const OfflineSummary& summary, const Config& cfg,
                          const std::string& dir);
void emit_online_outputs(const OnlineSummary& summary, const Config& cfg, const std::string& dir);

// Ordinary least squares on (log x, log y); requires two or more positive
// points.
SlopeFit fit_loglog_slope(std::span<const double> x, std::span<const double> y);

// cum_regret[t-1] holds Reg(t); returns Reg(c)/log(c) per checkpoint.
std::vector<double> regret_over_log(std::span<const double> cum_regret,
                                    std::span<const int64_t> checkpoints);

// Reads back the cells of an emitted offline summary.csv.
std::vector<OfflineCell> parse_offline_summary_csv(std::istream& is);

}  // namespace klpref::sweep

#endif  // KLPREF_SWEEP_HPP_
