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

#ifndef KLPREF_IO_HPP_
#define KLPREF_IO_HPP_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "klpref/model.hpp"
#include "klpref/offline.hpp"
#include "klpref/online.hpp"

namespace klpref::io {

// Shortest decimal that round-trips a binary64 exactly (17 significant
// digits via %.17g).
std::string fmt(double v);

double parse_double(const std::string& token);

// Instance text format, line oriented, '#' starts a comment:
//   klpref-instance 1
//   s_count S / a_count A / B x / beta x
//   d0 <S values>
//   pi_ref       (S rows of A values)
//   r_star       (S rows of A values)
//   fclass N     (N blocks of "member i" + S rows)
//   end
void write_instance(std::ostream& os, const Instance& inst,
                    std::span<const std::string> notes = {});
Instance read_instance(std::istream& is);
void write_instance_file(const std::string& path, const Instance& inst,
                         std::span<const std::string> notes = {});
Instance read_instance_file(const std::string& path);

struct DatasetFile {
  std::vector<PrivateSample> records;
  double epsilon = 0.0;
  uint64_t seed = 0;
};

// One record per line as "s a1 a2 z"; header carries n, epsilon, seed.
void write_dataset(std::ostream& os, std::span<const PrivateSample> records, double epsilon,
                   uint64_t seed);
DatasetFile read_dataset(std::istream& is);

// Pessimistic-fit export: r_bar, gamma, pi_hat matrices plus diagnostics.
void write_offline_fit(std::ostream& os, const offline::Fit& fit);

// Per-round CSV with the fixed column set; the header comment records the
// run parameters and the stream key.
void write_trace_csv(std::ostream& os, const online::RunTrace& trace);

}  // namespace klpref::io

#endif  // KLPREF_IO_HPP_
