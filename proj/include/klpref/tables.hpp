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

#ifndef KLPREF_TABLES_HPP_
#define KLPREF_TABLES_HPP_

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace klpref {

inline constexpr double kRowSumTol = 1e-12;

// Dense row-major state x action grid of doubles.
class Grid {
 public:
  Grid() = default;
  Grid(size_t states, size_t actions, double fill = 0.0)
      : states_(states), actions_(actions), data_(states * actions, fill) {}
  Grid(size_t states, size_t actions, std::vector<double> data)
      : states_(states), actions_(actions), data_(std::move(data)) {
    if (data_.size() != states_ * actions_) {
      throw std::invalid_argument("Grid: data size does not match shape");
    }
  }

  size_t states() const { return states_; }
  size_t actions() const { return actions_; }
  size_t size() const { return data_.size(); }

  double operator()(size_t s, size_t a) const { return data_[s * actions_ + a]; }
  double& operator()(size_t s, size_t a) { return data_[s * actions_ + a]; }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  bool same_shape(const Grid& other) const {
    return states_ == other.states_ && actions_ == other.actions_;
  }

  bool operator==(const Grid& other) const {
    return states_ == other.states_ && actions_ == other.actions_ && data_ == other.data_;
  }

  double max_abs_diff(const Grid& other) const {
    if (!same_shape(other)) throw std::invalid_argument("Grid: shape mismatch");
    double m = 0.0;
    for (size_t i = 0; i < data_.size(); ++i) m = std::max(m, std::fabs(data_[i] - other.data_[i]));
    return m;
  }

 private:
  size_t states_ = 0;
  size_t actions_ = 0;
  std::vector<double> data_;
};

// Bounded reward grid. The [0, bound] range is a modeling assumption checked
// where model inputs are built (instances, function classes, file loads);
// estimator outputs such as pessimistic tables are deliberately unclipped and
// may leave the range, so the constructor does not enforce it.
struct RewardTable {
  Grid values;
  double bound = 1.0;

  RewardTable() = default;
  RewardTable(Grid v, double b) : values(std::move(v)), bound(b) {
    if (!(bound > 0.0)) throw std::invalid_argument("RewardTable: bound must be positive");
  }

  double operator()(size_t s, size_t a) const { return values(s, a); }
  size_t states() const { return values.states(); }
  size_t actions() const { return values.actions(); }

  void check_bounds() const {
    for (double v : values.data()) {
      if (!(v >= 0.0 && v <= bound)) {
        throw std::invalid_argument("RewardTable: entry " + std::to_string(v) +
                                    " outside [0, " + std::to_string(bound) + "]");
      }
    }
  }
};

// Row-stochastic state x action grid.
struct PolicyTable {
  Grid probs;

  PolicyTable() = default;
  explicit PolicyTable(Grid p) : probs(std::move(p)) { check(); }

  double operator()(size_t s, size_t a) const { return probs(s, a); }
  size_t states() const { return probs.states(); }
  size_t actions() const { return probs.actions(); }

  bool strictly_positive() const {
    for (double v : probs.data())
      if (!(v > 0.0)) return false;
    return true;
  }

  void check() const {
    for (size_t s = 0; s < probs.states(); ++s) {
      double sum = 0.0;
      for (size_t a = 0; a < probs.actions(); ++a) {
        const double p = probs(s, a);
        if (!(p >= 0.0)) throw std::invalid_argument("PolicyTable: negative probability");
        sum += p;
      }
      if (std::fabs(sum - 1.0) > kRowSumTol) {
        throw std::invalid_argument("PolicyTable: row " + std::to_string(s) +
                                    " sums to " + std::to_string(sum));
      }
    }
  }
};

// Distribution over states.
struct StateDistribution {
  std::vector<double> probs;

  StateDistribution() = default;
  explicit StateDistribution(std::vector<double> p) : probs(std::move(p)) { check(); }

  static StateDistribution uniform(size_t states) {
    return StateDistribution(std::vector<double>(states, 1.0 / static_cast<double>(states)));
  }

  double operator()(size_t s) const { return probs[s]; }
  size_t states() const { return probs.size(); }

  void check() const {
    double sum = 0.0;
    for (double p : probs) {
      if (!(p >= 0.0)) throw std::invalid_argument("StateDistribution: negative probability");
      sum += p;
    }
    if (std::fabs(sum - 1.0) > kRowSumTol) {
      throw std::invalid_argument("StateDistribution: sums to " + std::to_string(sum));
    }
  }
};

}  // namespace klpref

#endif  // KLPREF_TABLES_HPP_
