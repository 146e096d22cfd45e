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

#ifndef KLPREF_RNG_HPP_
#define KLPREF_RNG_HPP_

#include <cstdint>
#include <span>
#include <stdexcept>

namespace klpref {

// Splittable counter-based generator. Each stream is (key, counter); the
// output at position i is a strong 64-bit hash of key + i * gamma, so streams
// are stateless apart from the counter and can be split without touching the
// parent's sequence. No global state anywhere.
class RngStream {
 public:
  explicit RngStream(uint64_t seed) : key_(seed) {}

  // Derives an independent child stream. Children of distinct ids and the
  // parent's own output sequence use different mixing paths.
  [[nodiscard]] RngStream split(uint64_t child_id) const {
    return RngStream(mix(mix(key_ ^ 0xd2b74407b1ce6e93ULL) + child_id));
  }

  uint64_t key() const { return key_; }

  uint64_t next_u64() {
    counter_ += 0x9e3779b97f4a7c15ULL;
    return mix(key_ + counter_);
  }

  // Uniform on [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]; safe as a log() argument.
  double next_double_pos() { return 1.0 - next_double(); }

  bool bernoulli(double p) { return next_double() < p; }

  // Samples an index proportional to the given nonnegative weights, assumed to
  // sum to 1 within the tolerances used elsewhere in the library.
  size_t categorical(std::span<const double> probs) {
    if (probs.empty()) throw std::invalid_argument("categorical: empty support");
    const double u = next_double();
    double cum = 0.0;
    for (size_t i = 0; i + 1 < probs.size(); ++i) {
      cum += probs[i];
      if (u < cum) return i;
    }
    return probs.size() - 1;
  }

 private:
  static uint64_t mix(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  uint64_t key_;
  uint64_t counter_ = 0;
};

}  // namespace klpref

#endif  // KLPREF_RNG_HPP_
