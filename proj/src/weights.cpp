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

#include "kor/weights.hpp"

#include <algorithm>
#include <string>

#include "kor/errors.hpp"

namespace kor {

WeightTable WeightTable::uniform() {
  WeightTable t;
  t.set_default_weight(1.0);
  return t;
}

WeightTable WeightTable::strict() { return WeightTable(); }

void WeightTable::insert(uint64_t id, double weight) {
  if (!(weight > 0.0 && weight <= 1.0)) {
    throw InvalidWeight("weight for id " + std::to_string(id) +
                        " must be in (0,1]");
  }
  weights_[id] = weight;
  max_weight_ = std::max(max_weight_, weight);
}

void WeightTable::set_default_weight(double weight) {
  if (!(weight > 0.0 && weight <= 1.0)) {
    throw InvalidWeight("default weight must be in (0,1]");
  }
  default_weight_ = weight;
  max_weight_ = std::max(max_weight_, weight);
}

double WeightTable::weight_of(uint64_t id) const {
  auto it = weights_.find(id);
  if (it != weights_.end()) return it->second;
  if (default_weight_) return *default_weight_;
  throw UnknownElement("id " + std::to_string(id) + " has no weight");
}

bool WeightTable::contains(uint64_t id) const {
  return default_weight_.has_value() || weights_.count(id) > 0;
}

}  // namespace kor
