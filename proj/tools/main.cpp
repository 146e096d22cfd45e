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

#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "klpref/invariants.hpp"
#include "klpref/io.hpp"
#include "klpref/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitConfigError = 2;

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::string seeds;
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonFlags* flags, bool config_required) {
  auto* opt = cmd->add_option("--config", flags->config_path, "configuration file");
  if (config_required) opt->required();
  cmd->add_option("--out", flags->out_dir, "output directory");
  cmd->add_option("--seeds", flags->seeds, "seed range a..b (overrides config)");
  cmd->add_option("--threads", flags->threads, "worker threads (overrides config)");
}

klpref::sweep::Config load_config(const CommonFlags& flags, klpref::sweep::Mode mode) {
  klpref::sweep::Config cfg;
  if (!flags.config_path.empty()) cfg = klpref::sweep::parse_config_file(flags.config_path);
  cfg.mode = mode;
  if (!flags.out_dir.empty()) cfg.out_dir = flags.out_dir;
  if (!flags.seeds.empty()) {
    const auto dots = flags.seeds.find("..");
    try {
      if (dots == std::string::npos) {
        cfg.seed_lo = cfg.seed_hi = std::stoull(flags.seeds);
      } else {
        cfg.seed_lo = std::stoull(flags.seeds.substr(0, dots));
        cfg.seed_hi = std::stoull(flags.seeds.substr(dots + 2));
      }
    } catch (const std::exception&) {
      throw klpref::sweep::ConfigError("config: bad --seeds range " + flags.seeds);
    }
  }
  if (flags.threads > 0) cfg.threads = flags.threads;
  klpref::sweep::validate(cfg);
  return cfg;
}

int run_gen_instance(const CommonFlags& flags) {
  auto cfg = load_config(flags, klpref::sweep::Mode::kGenInstance);
  const klpref::Instance inst = klpref::sweep::make_instance(cfg.instance, cfg.epsilon, 0);
  std::filesystem::create_directories(cfg.out_dir);
  const auto path = (std::filesystem::path(cfg.out_dir) / "instance.txt").string();
  std::vector<std::string> notes;
  if (cfg.instance.kind == klpref::sweep::InstanceConfig::Kind::kHard) {
    notes.push_back("two-action family: action index 0 is the -1 arm, index 1 is the +1 arm");
  }
  klpref::io::write_instance_file(path, inst, notes);
  std::cout << "wrote " << path << "\n";
  return kExitOk;
}

int run_offline(const CommonFlags& flags) {
  auto cfg = load_config(flags, klpref::sweep::Mode::kOffline);
  const auto summary = klpref::sweep::run_offline_sweep(cfg);
  klpref::sweep::emit_offline_outputs(summary, cfg, cfg.out_dir);
  for (const auto& cell : summary.cells) {
    std::cout << "epsilon=" << klpref::io::fmt(cell.epsilon) << " n=" << cell.n
              << " mean_subopt=" << klpref::io::fmt(cell.mean_subopt) << "\n";
  }
  for (const auto& [eps, fit] : summary.slopes) {
    std::cout << "epsilon=" << klpref::io::fmt(eps)
              << " loglog_slope=" << klpref::io::fmt(fit.slope) << " (" << fit.points
              << " points)\n";
  }
  std::cout << "outputs in " << cfg.out_dir << "\n";
  return kExitOk;
}

int run_online(const CommonFlags& flags) {
  auto cfg = load_config(flags, klpref::sweep::Mode::kOnline);
  const auto summary = klpref::sweep::run_online_sweep(cfg);
  klpref::sweep::emit_online_outputs(summary, cfg, cfg.out_dir);
  for (const auto& cell : summary.cells) {
    std::cout << "epsilon=" << klpref::io::fmt(cell.epsilon) << " T=" << cell.horizon
              << " mean_cum_regret=" << klpref::io::fmt(cell.mean_cum_regret) << "\n";
  }
  for (const auto& row : summary.checkpoints) {
    std::cout << "epsilon=" << klpref::io::fmt(row.epsilon) << " T=" << row.horizon
              << " reg(" << row.checkpoint
              << ")/log=" << klpref::io::fmt(row.reg_over_log) << "\n";
  }
  std::cout << "outputs in " << cfg.out_dir << "\n";
  return kExitOk;
}

int run_invariants(const CommonFlags& flags) {
  if (!flags.config_path.empty()) {
    // Parsed for validation only; the suite pins its own configurations.
    load_config(flags, klpref::sweep::Mode::kInvariants);
  }
  const auto results = klpref::invariants::run_all();
  klpref::invariants::print_report(std::cout, results);
  return klpref::invariants::all_passed(results) ? kExitOk : kExitCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tabular KL-regularized preference learning under local label privacy"};
  app.require_subcommand(1);

  CommonFlags gen_flags, off_flags, on_flags, inv_flags;
  auto* gen = app.add_subcommand("gen-instance", "generate an instance file");
  add_common(gen, &gen_flags, /*config_required=*/true);
  auto* off = app.add_subcommand("offline-sweep", "seeded pessimistic-fit sweep over (n, epsilon)");
  add_common(off, &off_flags, /*config_required=*/true);
  auto* on = app.add_subcommand("online-sweep", "seeded optimistic-run sweep over (T, epsilon)");
  add_common(on, &on_flags, /*config_required=*/true);
  auto* inv = app.add_subcommand("invariants", "run the library invariant checks");
  add_common(inv, &inv_flags, /*config_required=*/false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (gen->parsed()) return run_gen_instance(gen_flags);
    if (off->parsed()) return run_offline(off_flags);
    if (on->parsed()) return run_online(on_flags);
    if (inv->parsed()) return run_invariants(inv_flags);
  } catch (const klpref::sweep::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailure;
  }
  return kExitOk;
}
