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

#include <sstream>

#include "doctest.h"
#include "klpref/instances.hpp"
#include "klpref/invariants.hpp"

using namespace klpref;

TEST_CASE("decimal formatting round-trips binary64") {
  RngStream rng(31);
  for (int i = 0; i < 1000; ++i) {
    const double x = (rng.next_double() - 0.5) * std::pow(10.0, (i % 61) - 30);
    CHECK(io::parse_double(io::fmt(x)) == x);
  }
  CHECK(io::fmt(0.25) == "0.25");
  CHECK(io::parse_double("inf") == std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(io::parse_double("12x"), std::runtime_error);
}

TEST_CASE("instance files round-trip exactly") {
  RngStream rng(32);
  const Instance inst = random_instance(3, 3, 5, 2.0, 1.25, rng);

  std::ostringstream first;
  io::write_instance(first, inst);
  std::istringstream parse_in(first.str());
  const Instance loaded = io::read_instance(parse_in);

  CHECK(loaded.r_star.values == inst.r_star.values);
  CHECK(loaded.pi_ref.probs == inst.pi_ref.probs);
  CHECK(loaded.d0.probs == inst.d0.probs);
  CHECK(loaded.beta == inst.beta);
  CHECK(loaded.bound() == inst.bound());
  REQUIRE(loaded.fclass.size() == inst.fclass.size());
  for (size_t i = 0; i < inst.fclass.size(); ++i) {
    CHECK(loaded.fclass[i].values == inst.fclass[i].values);
  }

  std::ostringstream second;
  io::write_instance(second, loaded);
  CHECK(first.str() == second.str());
}

TEST_CASE("instance files accept comments and reject corruption") {
  RngStream rng(33);
  const Instance inst = random_instance(2, 2, 2, 1.0, 1.0, rng);
  std::ostringstream os;
  const std::vector<std::string> notes = {"generator: random S=2 A=2"};
  io::write_instance(os, inst, notes);
  CHECK(os.str().find("# generator: random S=2 A=2") != std::string::npos);
  std::istringstream is(os.str());
  CHECK_NOTHROW(io::read_instance(is));

  std::istringstream bad("klpref-instance 2\n");
  CHECK_THROWS_AS(io::read_instance(bad), std::runtime_error);
  std::istringstream truncated("klpref-instance 1\ns_count 2\n");
  CHECK_THROWS_AS(io::read_instance(truncated), std::runtime_error);
}

TEST_CASE("dataset files round-trip") {
  HardInstanceSpec spec;
  const Instance inst = hard_instance(spec);
  const PrivacyParams pp(0.5);
  RngStream rng(34);
  const auto data = offline_dataset_gen(inst, 250, pp, rng);

  std::ostringstream os;
  io::write_dataset(os, data, pp.epsilon(), 34);
  std::istringstream is(os.str());
  const auto loaded = io::read_dataset(is);
  CHECK(loaded.records == data);
  CHECK(loaded.epsilon == pp.epsilon());
  CHECK(loaded.seed == 34);

  std::istringstream bad("klpref-dataset n=1 epsilon=1 seed=0\n0 0 1 3\n");
  CHECK_THROWS_AS(io::read_dataset(bad), std::runtime_error);
  std::istringstream short_file("klpref-dataset n=2 epsilon=1 seed=0\n0 0 1 1\n");
  CHECK_THROWS_AS(io::read_dataset(short_file), std::runtime_error);
}

TEST_CASE("offline fit export carries every section") {
  const Instance inst = hard_instance(invariants::offline_bench_spec());
  const PrivacyParams pp(1.0);
  RngStream rng(35);
  const auto data = offline_dataset_gen(inst, 256, pp, rng);
  const auto fit = offline::fit(inst, data, pp, offline::Params{});
  std::ostringstream os;
  io::write_offline_fit(os, fit);
  const std::string text = os.str();
  for (const char* key : {"mle_index", "bonus_multiplier", "r_bar", "gamma", "r_hat", "pi_hat",
                          "d_sq", "d_pi_star_sq", "log_liks", "end"}) {
    CHECK(text.find(key) != std::string::npos);
  }
}

TEST_CASE("trace csv exposes the fixed column set") {
  const Instance inst = hard_instance(invariants::offline_bench_spec());
  online::Params params;
  params.horizon = 25;
  const auto trace = online::run(inst, PrivacyParams(1.0), params, RngStream(36));
  std::ostringstream os;
  io::write_trace_csv(os, trace);
  std::istringstream is(os.str());
  std::string line;
  REQUIRE(std::getline(is, line));
  CHECK(line.find("# T=25") != std::string::npos);
  CHECK(line.find("seed=36") != std::string::npos);
  REQUIRE(std::getline(is, line));
  CHECK(line == "t,s,a1,a2,z,rbar_index,fset_size,regret_pi2,regret_pi1,u_played,cum_min1_u2");
  int rows = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 10);
  }
  CHECK(rows == 25);
}
