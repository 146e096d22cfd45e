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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>

#include "klpref/io.hpp"

namespace klpref::sweep {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_eps_value(const std::string& v) {
  if (v == "inf" || v == "infinity") return std::numeric_limits<double>::infinity();
  return io::parse_double(v);
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config: bad boolean for " + key + ": " + v);
}

// Runs fn(0..count-1) on the requested number of threads; each task owns its
// output slot, so scheduling cannot affect results.
void run_parallel(size_t count, int threads, const std::function<void(size_t)>& fn) {
  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(count)));
  if (workers == 1) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::vector<std::exception_ptr> errors(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
}

struct Stats {
  double mean = 0.0;
  double median = 0.0;
  double stdev = 0.0;
};

Stats summarize(std::vector<double> values) {
  Stats st;
  if (values.empty()) return st;
  const size_t k = values.size();
  double sum = 0.0;
  for (double v : values) sum += v;
  st.mean = sum / static_cast<double>(k);
  double ss = 0.0;
  for (double v : values) ss += (v - st.mean) * (v - st.mean);
  st.stdev = k > 1 ? std::sqrt(ss / static_cast<double>(k - 1)) : 0.0;
  std::sort(values.begin(), values.end());
  st.median = k % 2 ? values[k / 2] : 0.5 * (values[k / 2 - 1] + values[k / 2]);
  return st;
}

uint64_t fnv1a64(const std::string& text) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string footer(const Config& cfg) {
  return "# config_hash=" + hex64(config_hash(cfg)) + " seeds=" + std::to_string(cfg.seed_lo) +
         ".." + std::to_string(cfg.seed_hi) + "\n";
}

void write_file(const std::string& dir, const std::string& name, const std::string& body) {
  const std::filesystem::path path = std::filesystem::path(dir) / name;
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
  os << body;
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

std::string signs_text(const std::vector<int>& signs) {
  std::string out;
  for (int v : signs) out += v > 0 ? '+' : '-';
  return out;
}

std::vector<int> parse_signs(const std::string& text) {
  std::vector<int> out;
  for (char c : text) {
    if (c == '+') {
      out.push_back(1);
    } else if (c == '-') {
      out.push_back(-1);
    } else {
      throw ConfigError("config: signs must be a string of + and - characters");
    }
  }
  return out;
}

}  // namespace

Config parse_config(std::istream& is) {
  Config cfg;
  std::string section;
  std::string line;
  size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("config: bad section header at line " +
                                                std::to_string(line_no));
      section = line.substr(1, line.size() - 2);
      if (section != "instance" && section != "privacy" && section != "offline" &&
          section != "online" && section != "sweep") {
        throw ConfigError("config: unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: expected key = value at line " + std::to_string(line_no));
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) throw ConfigError("config: key outside any section: " + key);

    try {
      if (section == "instance") {
        auto& ic = cfg.instance;
        if (key == "type") {
          if (value == "hard") {
            ic.kind = InstanceConfig::Kind::kHard;
          } else if (value == "random") {
            ic.kind = InstanceConfig::Kind::kRandom;
          } else if (value == "file") {
            ic.kind = InstanceConfig::Kind::kFile;
          } else {
            throw ConfigError("config: unknown instance type " + value);
          }
        } else if (key == "states") {
          ic.hard.states = static_cast<size_t>(std::stoull(value));
          ic.rand_states = ic.hard.states;
        } else if (key == "actions") {
          ic.rand_actions = static_cast<size_t>(std::stoull(value));
        } else if (key == "skew") {
          ic.hard.skew = io::parse_double(value);
        } else if (key == "gap") {
          if (value == "theory") {
            ic.theory_gap_mode = true;
          } else {
            ic.hard.gap = io::parse_double(value);
          }
        } else if (key == "beta") {
          ic.hard.beta = io::parse_double(value);
          ic.rand_beta = ic.hard.beta;
        } else if (key == "bound") {
          ic.hard.bound = io::parse_double(value);
          ic.rand_bound = ic.hard.bound;
        } else if (key == "signs") {
          ic.hard.signs = parse_signs(value);
        } else if (key == "class_seed") {
          ic.hard.class_seed = std::stoull(value);
        } else if (key == "extra_class_size") {
          ic.hard.extra_class_size = static_cast<size_t>(std::stoull(value));
        } else if (key == "class_size") {
          ic.rand_class_size = static_cast<size_t>(std::stoull(value));
        } else if (key == "seed") {
          ic.rand_seed = std::stoull(value);
        } else if (key == "path") {
          ic.path = value;
        } else {
          throw ConfigError("config: unknown key " + key + " in [instance]");
        }
      } else if (section == "privacy") {
        if (key == "epsilon") {
          cfg.epsilon = parse_eps_value(value);
        } else {
          throw ConfigError("config: unknown key " + key + " in [privacy]");
        }
      } else if (section == "offline") {
        auto& op = cfg.offline_params;
        if (key == "delta") {
          op.delta = io::parse_double(value);
        } else if (key == "c_bonus") {
          op.c_bonus = io::parse_double(value);
        } else if (key == "tau") {
          op.tau = io::parse_double(value);
        } else if (key == "bonus_mode") {
          if (value == "theory") {
            op.bonus_mode = offline::BonusMode::kTheory;
          } else if (value == "calibrated") {
            op.bonus_mode = offline::BonusMode::kCalibrated;
          } else {
            throw ConfigError("config: unknown bonus_mode " + value);
          }
        } else if (key == "bonus_cap") {
          op.bonus_cap = io::parse_double(value);
        } else if (key == "calib_replays") {
          op.calib_replays = static_cast<int>(std::stoll(value));
        } else if (key == "calib_seed") {
          op.calib_seed = std::stoull(value);
        } else if (key == "bonus_multiplier") {
          op.bonus_multiplier = io::parse_double(value);
        } else {
          throw ConfigError("config: unknown key " + key + " in [offline]");
        }
      } else if (section == "online") {
        auto& op = cfg.online_params;
        if (key == "delta") {
          op.delta = io::parse_double(value);
        } else if (key == "lambda") {
          op.lambda = io::parse_double(value);
        } else if (key == "gamma_scale") {
          op.gamma_scale = io::parse_double(value);
        } else if (key == "restrict_to_confidence_set") {
          op.restrict_to_confidence_set = parse_bool(value, key);
        } else if (key == "checkpoints") {
          for (const auto& tok : split(value, ',')) {
            cfg.checkpoints.push_back(std::stoll(trim(tok)));
          }
        } else {
          throw ConfigError("config: unknown key " + key + " in [online]");
        }
      } else if (section == "sweep") {
        if (key == "n") {
          for (const auto& tok : split(value, ',')) {
            cfg.n_grid.push_back(static_cast<size_t>(std::stoull(trim(tok))));
          }
        } else if (key == "epsilon") {
          for (const auto& tok : split(value, ',')) {
            cfg.eps_grid.push_back(parse_eps_value(trim(tok)));
          }
        } else if (key == "T") {
          for (const auto& tok : split(value, ',')) {
            cfg.t_grid.push_back(std::stoll(trim(tok)));
          }
        } else if (key == "seeds") {
          const auto dots = value.find("..");
          if (dots == std::string::npos) {
            cfg.seed_lo = cfg.seed_hi = std::stoull(value);
          } else {
            cfg.seed_lo = std::stoull(value.substr(0, dots));
            cfg.seed_hi = std::stoull(value.substr(dots + 2));
          }
        } else if (key == "threads") {
          cfg.threads = static_cast<int>(std::stoll(value));
        } else {
          throw ConfigError("config: unknown key " + key + " in [sweep]");
        }
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError("config: bad value for " + key + " at line " + std::to_string(line_no) +
                        ": " + e.what());
    }
  }
  std::sort(cfg.n_grid.begin(), cfg.n_grid.end());
  std::sort(cfg.eps_grid.begin(), cfg.eps_grid.end());
  std::sort(cfg.t_grid.begin(), cfg.t_grid.end());
  std::sort(cfg.checkpoints.begin(), cfg.checkpoints.end());
  return cfg;
}

Config parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("config: cannot open " + path);
  return parse_config(is);
}

Instance make_instance(const InstanceConfig& cfg, double epsilon, size_t n) {
  try {
    switch (cfg.kind) {
      case InstanceConfig::Kind::kHard: {
        HardInstanceSpec spec = cfg.hard;
        if (cfg.theory_gap_mode) {
          if (n == 0) throw ConfigError("config: gap = theory requires an offline n grid");
          spec.gap = theory_gap(spec.states, spec.skew, epsilon, n);
        }
        return hard_instance(spec);
      }
      case InstanceConfig::Kind::kRandom: {
        RngStream rng(cfg.rand_seed);
        return random_instance(cfg.rand_states, cfg.rand_actions, cfg.rand_class_size,
                               cfg.rand_bound, cfg.rand_beta, rng);
      }
      case InstanceConfig::Kind::kFile:
        return io::read_instance_file(cfg.path);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: cannot build instance: ") + e.what());
  }
  throw ConfigError("config: unreachable instance kind");
}

void validate(const Config& cfg) {
  const auto check_eps = [](double e) {
    if (std::isinf(e) && e > 0) return;
    if (!(e > 0.0)) throw ConfigError("config: epsilon must be positive");
  };
  check_eps(cfg.epsilon);
  for (double e : cfg.eps_grid) check_eps(e);
  if (!(cfg.offline_params.delta > 0.0 && cfg.offline_params.delta < 1.0)) {
    throw ConfigError("config: delta must lie in (0,1)");
  }
  if (!(cfg.online_params.delta > 0.0 && cfg.online_params.delta < 1.0)) {
    throw ConfigError("config: delta must lie in (0,1)");
  }
  if (cfg.seed_hi < cfg.seed_lo) throw ConfigError("config: empty seed range");
  if (cfg.threads < 1) throw ConfigError("config: threads must be at least 1");

  if (cfg.mode == Mode::kOffline) {
    if (cfg.n_grid.empty()) throw ConfigError("config: offline mode needs a nonempty n grid");
    if (effective_eps_grid(cfg).empty()) {
      throw ConfigError("config: offline mode needs an epsilon");
    }
    for (size_t n : cfg.n_grid) {
      if (n == 0) throw ConfigError("config: n grid entries must be positive");
    }
  }
  if (cfg.mode == Mode::kOnline) {
    if (cfg.t_grid.empty()) throw ConfigError("config: online mode needs a nonempty T grid");
    for (int64_t t : cfg.t_grid) {
      if (t < 1) throw ConfigError("config: T grid entries must be positive");
    }
    for (int64_t c : cfg.checkpoints) {
      if (c < 2) throw ConfigError("config: checkpoints must be at least 2");
    }
    if (cfg.instance.theory_gap_mode) {
      throw ConfigError("config: gap = theory requires an offline n grid");
    }
    // The lambda ceiling needs Gamma_T, hence the instance class size.
    if (cfg.online_params.lambda > 0.0) {
      const Instance inst = make_instance(cfg.instance, cfg.epsilon, 0);
      for (double eps : effective_eps_grid(cfg)) {
        const PrivacyParams pp(eps);
        for (int64_t t : cfg.t_grid) {
          const double gamma_t =
              online::confidence_radius(inst.bound(), t, inst.fclass.size(),
                                        cfg.online_params.delta, pp.alpha(),
                                        cfg.online_params.gamma_scale);
          if (cfg.online_params.lambda > gamma_t * gamma_t / 2.0) {
            throw ConfigError("config: lambda exceeds Gamma_T^2/2");
          }
        }
      }
    }
  }
}

std::vector<double> effective_eps_grid(const Config& cfg) {
  if (!cfg.eps_grid.empty()) return cfg.eps_grid;
  return {cfg.epsilon};
}

std::string canonical_text(const Config& cfg) {
  std::ostringstream os;
  os << "mode=" << static_cast<int>(cfg.mode) << '\n';
  os << "instance.kind=" << static_cast<int>(cfg.instance.kind) << '\n';
  os << "instance.hard=" << cfg.instance.hard.states << ',' << io::fmt(cfg.instance.hard.skew)
     << ',' << io::fmt(cfg.instance.hard.gap) << ',' << io::fmt(cfg.instance.hard.beta) << ','
     << io::fmt(cfg.instance.hard.bound) << ',' << signs_text(cfg.instance.hard.signs) << ','
     << cfg.instance.hard.max_enumerated_states << ',' << cfg.instance.hard.extra_class_size
     << ',' << cfg.instance.hard.class_seed << '\n';
  os << "instance.theory_gap=" << cfg.instance.theory_gap_mode << '\n';
  os << "instance.random=" << cfg.instance.rand_states << ',' << cfg.instance.rand_actions << ','
     << cfg.instance.rand_class_size << ',' << io::fmt(cfg.instance.rand_bound) << ','
     << io::fmt(cfg.instance.rand_beta) << ',' << cfg.instance.rand_seed << '\n';
  os << "instance.path=" << cfg.instance.path << '\n';
  os << "privacy.epsilon=" << io::fmt(cfg.epsilon) << '\n';
  os << "offline=" << io::fmt(cfg.offline_params.delta) << ','
     << io::fmt(cfg.offline_params.c_bonus) << ',' << io::fmt(cfg.offline_params.tau) << ','
     << static_cast<int>(cfg.offline_params.bonus_mode) << ','
     << io::fmt(cfg.offline_params.bonus_cap) << ',' << cfg.offline_params.calib_replays << ','
     << cfg.offline_params.calib_seed << ','
     << (cfg.offline_params.bonus_multiplier ? io::fmt(*cfg.offline_params.bonus_multiplier)
                                             : std::string("none"))
     << '\n';
  os << "online=" << io::fmt(cfg.online_params.delta) << ',' << io::fmt(cfg.online_params.lambda)
     << ',' << io::fmt(cfg.online_params.gamma_scale) << ','
     << cfg.online_params.restrict_to_confidence_set << '\n';
  os << "grid.n=";
  for (size_t n : cfg.n_grid) os << n << ';';
  os << "\ngrid.eps=";
  for (double e : cfg.eps_grid) os << io::fmt(e) << ';';
  os << "\ngrid.T=";
  for (int64_t t : cfg.t_grid) os << t << ';';
  os << "\ncheckpoints=";
  for (int64_t c : cfg.checkpoints) os << c << ';';
  os << "\nseeds=" << cfg.seed_lo << ".." << cfg.seed_hi << '\n';
  return os.str();
}

uint64_t config_hash(const Config& cfg) { return fnv1a64(canonical_text(cfg)); }

SlopeFit fit_loglog_slope(std::span<const double> x, std::span<const double> y) {
  std::vector<double> lx, ly;
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  SlopeFit fit;
  fit.points = lx.size();
  if (fit.points < 2) return fit;
  const auto k = static_cast<double>(fit.points);
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  fit.slope = sxy / sxx;
  if (fit.points > 2) {
    const double intercept = my - fit.slope * mx;
    double ss_resid = 0.0;
    for (size_t i = 0; i < lx.size(); ++i) {
      const double r = ly[i] - (intercept + fit.slope * lx[i]);
      ss_resid += r * r;
    }
    fit.std_error = std::sqrt(ss_resid / (k - 2.0) / sxx);
  }
  return fit;
}

std::vector<double> regret_over_log(std::span<const double> cum_regret,
                                    std::span<const int64_t> checkpoints) {
  std::vector<double> out;
  out.reserve(checkpoints.size());
  for (int64_t c : checkpoints) {
    if (c < 2 || static_cast<size_t>(c) > cum_regret.size()) {
      throw std::invalid_argument("regret_over_log: checkpoint out of range");
    }
    out.push_back(cum_regret[static_cast<size_t>(c) - 1] / std::log(static_cast<double>(c)));
  }
  return out;
}

OfflineSummary run_offline_sweep(const Config& cfg) {
  validate(cfg);
  const std::vector<double> eps_grid = effective_eps_grid(cfg);
  const size_t seeds = cfg.seed_hi - cfg.seed_lo + 1;

  struct Cell {
    double epsilon;
    size_t n;
    Instance inst;
    PrivacyParams pp;
    offline::Params params;
  };
  std::vector<Cell> cells;
  for (double eps : eps_grid) {
    for (size_t n : cfg.n_grid) {
      Cell cell{eps, n, make_instance(cfg.instance, eps, n), PrivacyParams(eps),
                cfg.offline_params};
      // Calibrate once per cell so every seed shares the multiplier.
      if (cell.params.bonus_mode == offline::BonusMode::kCalibrated &&
          !cell.params.bonus_multiplier) {
        cell.params.bonus_multiplier =
            offline::calibrate_bonus_multiplier(cell.inst, n, cell.pp, cell.params);
      }
      cells.push_back(std::move(cell));
    }
  }

  OfflineSummary summary;
  summary.runs.resize(cells.size() * seeds);
  run_parallel(cells.size() * seeds, cfg.threads, [&](size_t task) {
    const size_t ci = task / seeds;
    const uint64_t seed = cfg.seed_lo + task % seeds;
    const Cell& cell = cells[ci];
    RngStream stream = RngStream(seed).split(ci);
    const auto data = offline_dataset_gen(cell.inst, cell.n, cell.pp, stream);
    const auto fit = offline::fit(cell.inst, data, cell.pp, cell.params);
    OfflineRun& run = summary.runs[task];
    run.epsilon = cell.epsilon;
    run.n = cell.n;
    run.seed = seed;
    run.subopt = suboptimality(fit.pi_hat, cell.inst);
    run.mle_index = fit.mle_index;
  });

  for (size_t ci = 0; ci < cells.size(); ++ci) {
    std::vector<double> subopts(seeds);
    for (size_t si = 0; si < seeds; ++si) subopts[si] = summary.runs[ci * seeds + si].subopt;
    const Stats st = summarize(subopts);
    summary.cells.push_back({cells[ci].epsilon, cells[ci].n, seeds, st.mean, st.median,
                             st.stdev});
  }

  for (double eps : eps_grid) {
    std::vector<double> xs, ys;
    for (const auto& cell : summary.cells) {
      if (cell.epsilon == eps) {
        xs.push_back(static_cast<double>(cell.n));
        ys.push_back(cell.mean_subopt);
      }
    }
    if (xs.size() >= 2) summary.slopes.emplace_back(eps, fit_loglog_slope(xs, ys));
  }
  return summary;
}

OnlineSummary run_online_sweep(const Config& cfg) {
  validate(cfg);
  const std::vector<double> eps_grid = effective_eps_grid(cfg);
  const size_t seeds = cfg.seed_hi - cfg.seed_lo + 1;

  struct Cell {
    double epsilon;
    int64_t horizon;
    Instance inst;
    PrivacyParams pp;
    online::Params params;
  };
  std::vector<Cell> cells;
  for (double eps : eps_grid) {
    for (int64_t t : cfg.t_grid) {
      online::Params params = cfg.online_params;
      params.horizon = t;
      cells.push_back({eps, t, make_instance(cfg.instance, eps, 0), PrivacyParams(eps), params});
    }
  }

  OnlineSummary summary;
  summary.runs.resize(cells.size() * seeds);
  run_parallel(cells.size() * seeds, cfg.threads, [&](size_t task) {
    const size_t ci = task / seeds;
    const uint64_t seed = cfg.seed_lo + task % seeds;
    const Cell& cell = cells[ci];
    OnlineRun& run = summary.runs[task];
    run.epsilon = cell.epsilon;
    run.horizon = cell.horizon;
    run.seed = seed;
    run.trace = online::run(cell.inst, cell.pp, cell.params, RngStream(seed).split(ci));
    run.cum_regret = run.trace.cum_regret_pi2(cell.horizon);
  });

  for (size_t ci = 0; ci < cells.size(); ++ci) {
    std::vector<double> regrets(seeds);
    for (size_t si = 0; si < seeds; ++si) regrets[si] = summary.runs[ci * seeds + si].cum_regret;
    const Stats st = summarize(regrets);
    summary.cells.push_back({cells[ci].epsilon, cells[ci].horizon, seeds, st.mean, st.median,
                             st.stdev});

    std::vector<int64_t> checkpoints = cfg.checkpoints;
    if (checkpoints.empty()) {
      for (int64_t c : {cells[ci].horizon / 4, cells[ci].horizon / 2, cells[ci].horizon}) {
        if (c >= 2) checkpoints.push_back(c);
      }
    } else {
      std::erase_if(checkpoints, [&](int64_t c) { return c > cells[ci].horizon; });
    }
    for (int64_t c : checkpoints) {
      double mean_reg = 0.0;
      for (size_t si = 0; si < seeds; ++si) {
        mean_reg += summary.runs[ci * seeds + si].trace.cum_regret_pi2(c);
      }
      mean_reg /= static_cast<double>(seeds);
      summary.checkpoints.push_back(
          {cells[ci].epsilon, cells[ci].horizon, c, mean_reg,
           mean_reg / std::log(static_cast<double>(c))});
    }
  }
  return summary;
}

void emit_offline_outputs(const OfflineSummary& summary, const Config& cfg,
                          const std::string& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ostringstream os;
    os << "epsilon,n,replays,mean_subopt,median_subopt,std_subopt\n";
    for (const auto& cell : summary.cells) {
      os << io::fmt(cell.epsilon) << ',' << cell.n << ',' << cell.replays << ','
         << io::fmt(cell.mean_subopt) << ',' << io::fmt(cell.median_subopt) << ','
         << io::fmt(cell.std_subopt) << '\n';
    }
    os << footer(cfg);
    write_file(dir, "summary.csv", os.str());
  }
  {
    std::ostringstream os;
    os << "epsilon,slope,std_error,points\n";
    for (const auto& [eps, fit] : summary.slopes) {
      os << io::fmt(eps) << ',' << io::fmt(fit.slope) << ',' << io::fmt(fit.std_error) << ','
         << fit.points << '\n';
    }
    os << footer(cfg);
    write_file(dir, "slopes.csv", os.str());
  }
  {
    std::ostringstream os;
    os << "epsilon,n,seed,subopt,mle_index\n";
    for (const auto& run : summary.runs) {
      os << io::fmt(run.epsilon) << ',' << run.n << ',' << run.seed << ',' << io::fmt(run.subopt)
         << ',' << run.mle_index << '\n';
    }
    os << footer(cfg);
    write_file(dir, "runs.csv", os.str());
  }
  for (double eps : effective_eps_grid(cfg)) {
    std::ostringstream os;
    os << "n,mean_subopt,stderr_mean\n";
    for (const auto& cell : summary.cells) {
      if (cell.epsilon != eps || cell.replays == 0) continue;
      os << cell.n << ',' << io::fmt(cell.mean_subopt) << ','
         << io::fmt(cell.std_subopt / std::sqrt(static_cast<double>(cell.replays))) << '\n';
    }
    os << footer(cfg);
    write_file(dir, "plot_subopt_eps" + io::fmt(eps) + ".csv", os.str());
  }
}

void emit_online_outputs(const OnlineSummary& summary, const Config& cfg,
                         const std::string& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ostringstream os;
    os << "epsilon,T,replays,mean_cum_regret,median_cum_regret,std_cum_regret\n";
    for (const auto& cell : summary.cells) {
      os << io::fmt(cell.epsilon) << ',' << cell.horizon << ',' << cell.replays << ','
         << io::fmt(cell.mean_cum_regret) << ',' << io::fmt(cell.median_cum_regret) << ','
         << io::fmt(cell.std_cum_regret) << '\n';
    }
    os << footer(cfg);
    write_file(dir, "summary.csv", os.str());
  }
  {
    std::ostringstream os;
    os << "epsilon,T,checkpoint,mean_cum_regret,reg_over_log\n";
    for (const auto& row : summary.checkpoints) {
      os << io::fmt(row.epsilon) << ',' << row.horizon << ',' << row.checkpoint << ','
         << io::fmt(row.mean_cum_regret) << ',' << io::fmt(row.reg_over_log) << '\n';
    }
    os << footer(cfg);
    write_file(dir, "checkpoints.csv", os.str());
  }
  for (const auto& run : summary.runs) {
    std::ostringstream os;
    io::write_trace_csv(os, run.trace);
    os << footer(cfg);
    write_file(dir, "trace_eps" + io::fmt(run.epsilon) + "_T" + std::to_string(run.horizon) +
                        "_seed" + std::to_string(run.seed) + ".csv",
               os.str());
  }
  // Plot data: mean cumulative regret curve per cell.
  for (const auto& cell : summary.cells) {
    std::ostringstream os;
    os << "t,mean_cum_regret_pi2,stderr_mean\n";
    std::vector<const OnlineRun*> cell_runs;
    for (const auto& run : summary.runs) {
      if (run.epsilon == cell.epsilon && run.horizon == cell.horizon) cell_runs.push_back(&run);
    }
    std::vector<double> cum(cell_runs.size(), 0.0);
    for (int64_t t = 1; t <= cell.horizon; ++t) {
      for (size_t ri = 0; ri < cell_runs.size(); ++ri) {
        cum[ri] += cell_runs[ri]->trace.steps[static_cast<size_t>(t) - 1].regret_pi2;
      }
      const Stats st = summarize(cum);
      os << t << ',' << io::fmt(st.mean) << ','
         << io::fmt(cell_runs.size() > 1
                        ? st.stdev / std::sqrt(static_cast<double>(cell_runs.size()))
                        : 0.0)
         << '\n';
    }
    os << footer(cfg);
    write_file(dir, "plot_regret_eps" + io::fmt(cell.epsilon) + "_T" +
                        std::to_string(cell.horizon) + ".csv",
               os.str());
  }
}

std::vector<OfflineCell> parse_offline_summary_csv(std::istream& is) {
  std::vector<OfflineCell> cells;
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("summary csv: empty");
  if (line != "epsilon,n,replays,mean_subopt,median_subopt,std_subopt") {
    throw std::runtime_error("summary csv: unexpected header");
  }
  while (std::getline(is, line)) {
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split(line, ',');
    if (fields.size() != 6) throw std::runtime_error("summary csv: bad row");
    OfflineCell cell;
    cell.epsilon = io::parse_double(fields[0]);
    cell.n = static_cast<size_t>(std::stoull(fields[1]));
    cell.replays = static_cast<size_t>(std::stoull(fields[2]));
    cell.mean_subopt = io::parse_double(fields[3]);
    cell.median_subopt = io::parse_double(fields[4]);
    cell.std_subopt = io::parse_double(fields[5]);
    cells.push_back(cell);
  }
  return cells;
}

}  // namespace klpref::sweep
