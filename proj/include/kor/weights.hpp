/*
 * Copyright 2026 The kor-sketch Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>

namespace kor {

/// Public, fixed map element id -> weight in (0,1]. Weights are shared data
/// between parties, never private. A table may carry a default weight (1.0
/// for tables loaded from files, giving unweighted mode for ids not listed);
/// without one, looking up an unknown id is an error.
class WeightTable {
 public:
  WeightTable() = default;

  /// All-ones table: every id weighs 1.0 (unweighted F0 mode).
  static WeightTable uniform();

  /// Strict table: only explicitly inserted ids resolve.
  static WeightTable strict();

  void insert(uint64_t id, double weight);
  void set_default_weight(double weight);

  /// Weight of an element; throws UnknownElement for ids not present when
  /// no default weight is configured.
  double weight_of(uint64_t id) const;

  bool contains(uint64_t id) const;

  /// Largest weight the table can hand out: max over stored weights and the
  /// default (when set). Used as the Laplace sensitivity of set weights,
  /// since neighboring sets differ by one element.
  double max_weight() const { return max_weight_; }

  size_t stored_count() const { return weights_.size(); }
  const std::unordered_map<uint64_t, double>& entries() const {
    return weights_;
  }

 private:
  std::unordered_map<uint64_t, double> weights_;
  std::optional<double> default_weight_;
  double max_weight_ = 0.0;
};

}  // namespace kor
