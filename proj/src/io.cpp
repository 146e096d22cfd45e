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

#include "klpref/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace klpref::io {

namespace {

// Reads lines, strips '#' comments and blank lines, hands out tokens.
class LineReader {
 public:
  explicit LineReader(std::istream& is) : is_(is) {}

  // Next nonempty token line split on whitespace; empty vector at EOF.
  std::vector<std::string> next_line() {
    std::string line;
    while (std::getline(is_, line)) {
      if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
      std::istringstream ss(line);
      std::vector<std::string> tokens;
      std::string tok;
      while (ss >> tok) tokens.push_back(tok);
      if (!tokens.empty()) return tokens;
    }
    return {};
  }

  std::vector<std::string> expect_line(const std::string& what) {
    auto tokens = next_line();
    if (tokens.empty()) throw std::runtime_error("instance file: unexpected end, expected " + what);
    return tokens;
  }

 private:
  std::istream& is_;
};

size_t parse_size(const std::string& tok) {
  size_t pos = 0;
  const unsigned long long v = std::stoull(tok, &pos);
  if (pos != tok.size()) throw std::runtime_error("bad integer: " + tok);
  return static_cast<size_t>(v);
}

void write_grid_rows(std::ostream& os, const Grid& g) {
  for (size_t s = 0; s < g.states(); ++s) {
    for (size_t a = 0; a < g.actions(); ++a) {
      if (a) os << ' ';
      os << fmt(g(s, a));
    }
    os << '\n';
  }
}

Grid read_grid_rows(LineReader& reader, size_t states, size_t actions, const std::string& what) {
  Grid g(states, actions);
  for (size_t s = 0; s < states; ++s) {
    auto tokens = reader.expect_line(what + " row");
    if (tokens.size() != actions) throw std::runtime_error(what + ": wrong row length");
    for (size_t a = 0; a < actions; ++a) g(s, a) = parse_double(tokens[a]);
  }
  return g;
}

}  // namespace

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& token) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end != begin + token.size()) throw std::runtime_error("bad number: " + token);
  return v;
}

void write_instance(std::ostream& os, const Instance& inst,
                    std::span<const std::string> notes) {
  os << "klpref-instance 1\n";
  for (const auto& note : notes) os << "# " << note << '\n';
  os << "s_count " << inst.states() << '\n';
  os << "a_count " << inst.actions() << '\n';
  os << "B " << fmt(inst.bound()) << '\n';
  os << "beta " << fmt(inst.beta) << '\n';
  os << "d0";
  for (size_t s = 0; s < inst.states(); ++s) os << ' ' << fmt(inst.d0(s));
  os << '\n';
  os << "pi_ref\n";
  write_grid_rows(os, inst.pi_ref.probs);
  os << "r_star\n";
  write_grid_rows(os, inst.r_star.values);
  os << "fclass " << inst.fclass.size() << '\n';
  for (size_t i = 0; i < inst.fclass.size(); ++i) {
    os << "member " << i << '\n';
    write_grid_rows(os, inst.fclass[i].values);
  }
  os << "end\n";
}

Instance read_instance(std::istream& is) {
  LineReader reader(is);
  auto magic = reader.expect_line("magic");
  if (magic.size() != 2 || magic[0] != "klpref-instance" || magic[1] != "1") {
    throw std::runtime_error("instance file: bad magic line");
  }
  auto expect_kv = [&reader](const std::string& key) {
    auto tokens = reader.expect_line(key);
    if (tokens.size() < 2 || tokens[0] != key) {
      throw std::runtime_error("instance file: expected '" + key + "'");
    }
    return tokens;
  };
  const size_t S = parse_size(expect_kv("s_count")[1]);
  const size_t A = parse_size(expect_kv("a_count")[1]);
  const double B = parse_double(expect_kv("B")[1]);
  const double beta = parse_double(expect_kv("beta")[1]);
  auto d0_tokens = expect_kv("d0");
  if (d0_tokens.size() != S + 1) throw std::runtime_error("instance file: d0 length mismatch");
  std::vector<double> d0(S);
  for (size_t s = 0; s < S; ++s) d0[s] = parse_double(d0_tokens[s + 1]);

  if (reader.expect_line("pi_ref")[0] != "pi_ref") {
    throw std::runtime_error("instance file: expected pi_ref");
  }
  Grid pi_ref = read_grid_rows(reader, S, A, "pi_ref");
  if (reader.expect_line("r_star")[0] != "r_star") {
    throw std::runtime_error("instance file: expected r_star");
  }
  Grid r_star = read_grid_rows(reader, S, A, "r_star");

  auto fclass_tokens = expect_kv("fclass");
  const size_t n_members = parse_size(fclass_tokens[1]);
  std::vector<RewardTable> members;
  members.reserve(n_members);
  for (size_t i = 0; i < n_members; ++i) {
    auto member_tokens = reader.expect_line("member");
    if (member_tokens.size() != 2 || member_tokens[0] != "member" ||
        parse_size(member_tokens[1]) != i) {
      throw std::runtime_error("instance file: expected 'member " + std::to_string(i) + "'");
    }
    members.emplace_back(read_grid_rows(reader, S, A, "member"), B);
  }
  if (reader.expect_line("end")[0] != "end") {
    throw std::runtime_error("instance file: expected end");
  }
  return Instance(StateDistribution(std::move(d0)), PolicyTable(std::move(pi_ref)),
                  RewardTable(std::move(r_star), B), FunctionClass(std::move(members)), beta);
}

void write_instance_file(const std::string& path, const Instance& inst,
                         std::span<const std::string> notes) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  write_instance(os, inst, notes);
  if (!os) throw std::runtime_error("write failed: " + path);
}

Instance read_instance_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open: " + path);
  return read_instance(is);
}

void write_dataset(std::ostream& os, std::span<const PrivateSample> records, double epsilon,
                   uint64_t seed) {
  os << "klpref-dataset n=" << records.size() << " epsilon=" << fmt(epsilon) << " seed=" << seed
     << '\n';
  for (const auto& rec : records) {
    os << rec.s << ' ' << rec.a1 << ' ' << rec.a2 << ' ' << rec.z << '\n';
  }
}

DatasetFile read_dataset(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw std::runtime_error("dataset file: empty");
  std::istringstream hs(header);
  std::string magic;
  hs >> magic;
  if (magic != "klpref-dataset") throw std::runtime_error("dataset file: bad magic");
  DatasetFile out;
  size_t n = 0;
  std::string field;
  while (hs >> field) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw std::runtime_error("dataset file: bad header field " + field);
    const std::string key = field.substr(0, eq);
    const std::string value = field.substr(eq + 1);
    if (key == "n") {
      n = parse_size(value);
    } else if (key == "epsilon") {
      out.epsilon = parse_double(value);
    } else if (key == "seed") {
      out.seed = std::stoull(value);
    } else {
      throw std::runtime_error("dataset file: unknown header field " + key);
    }
  }
  out.records.reserve(n);
  PrivateSample rec;
  while (is >> rec.s >> rec.a1 >> rec.a2 >> rec.z) {
    if (rec.z != 1 && rec.z != -1) throw std::runtime_error("dataset file: label must be -1 or +1");
    out.records.push_back(rec);
  }
  if (out.records.size() != n) {
    throw std::runtime_error("dataset file: header n does not match record count");
  }
  return out;
}

void write_offline_fit(std::ostream& os, const offline::Fit& fit) {
  os << "klpref-offline-fit 1\n";
  os << "mle_index " << fit.mle_index << '\n';
  os << "bonus_multiplier " << fmt(fit.bonus_multiplier) << '\n';
  os << "d_pi_star_sq " << fmt(fit.d_pi_star_sq) << '\n';
  os << "log_liks";
  for (double ll : fit.log_liks) os << ' ' << fmt(ll);
  os << '\n';
  os << "r_bar\n";
  write_grid_rows(os, fit.r_bar.values);
  os << "gamma\n";
  write_grid_rows(os, fit.gamma);
  os << "r_hat\n";
  write_grid_rows(os, fit.r_hat);
  os << "pi_hat\n";
  write_grid_rows(os, fit.pi_hat.probs);
  os << "d_sq\n";
  write_grid_rows(os, fit.d_sq);
  os << "end\n";
}

void write_trace_csv(std::ostream& os, const online::RunTrace& trace) {
  os << "# T=" << trace.steps.size() << " epsilon=" << fmt(trace.epsilon)
     << " delta=" << fmt(trace.delta) << " lambda=" << fmt(trace.lambda)
     << " gamma_T=" << fmt(trace.gamma_t) << " gamma_scale=" << fmt(trace.gamma_scale)
     << " seed=" << trace.stream_key << '\n';
  os << "t,s,a1,a2,z,rbar_index,fset_size,regret_pi2,regret_pi1,u_played,cum_min1_u2\n";
  for (const auto& st : trace.steps) {
    os << st.t << ',' << st.s << ',' << st.a1 << ',' << st.a2 << ',' << st.z << ','
       << st.rbar_index << ',' << st.fset_size << ',' << fmt(st.regret_pi2) << ','
       << fmt(st.regret_pi1) << ',' << fmt(st.u_played) << ',' << fmt(st.cum_min1_u2) << '\n';
  }
}

}  // namespace klpref::io
