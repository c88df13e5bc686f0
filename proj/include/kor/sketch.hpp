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

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "kor/bitmatrix.hpp"
#include "kor/params.hpp"
#include "kor/weights.hpp"

namespace kor {

using ParamsDigest = std::array<uint8_t, 32>;

/// SHA-256 over the canonical binary header of the params (including the
/// seed). Sketches carry this digest so that combining sketches from
/// different families is a hard error instead of silent garbage.
ParamsDigest params_digest(const SketchParams& params);

/// Clean GF(2)-linear sketch: an L x n bit matrix where element j (when
/// sampled at level i) toggles bit (i, bucket(j)). Linear by construction:
/// build(A) xor build(B) == build(A symmetric-difference B) under one seed.
struct KorSketch {
  ParamsDigest digest{};
  BitMatrix bits;

  bool operator==(const KorSketch&) const = default;
};

/// Builds the sketch of a duplicate-free set of element ids. Throws
/// DuplicateElement on repeats (multiset input belongs to the streaming
/// module) and UnknownElement for ids without a weight. Runtime is linear
/// in the set size plus the sketch size.
KorSketch build(std::span<const uint64_t> set, const WeightTable& weights,
                const SketchParams& params);

/// Entrywise XOR of two sketches of the same family.
KorSketch xor_sketches(const KorSketch& a, const KorSketch& b);

/// Toggles a single element's membership. Self-inverse.
KorSketch update(const KorSketch& sketch, uint64_t element,
                 const WeightTable& weights, const SketchParams& params);

/// Empty sketch of the family (all-zero bit matrix).
KorSketch empty_sketch(const SketchParams& params);

}  // namespace kor
