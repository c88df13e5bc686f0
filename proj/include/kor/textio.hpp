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
#include <string>
#include <vector>

#include "kor/weights.hpp"

namespace kor {

/// Input set file: UTF-8 text, one decimal element id per line. Duplicates
/// are passed through (build rejects them; streams allow them).
std::vector<uint64_t> read_id_file(const std::string& path);

/// Weights file: TSV lines "id<TAB>weight" with weight in (0,1]. Ids absent
/// from the file default to weight 1.0 (unweighted mode).
WeightTable read_weights_tsv(const std::string& path);

}  // namespace kor
