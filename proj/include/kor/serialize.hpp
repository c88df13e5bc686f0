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

#include <string>
#include <variant>
#include <vector>

#include "kor/privacy.hpp"
#include "kor/sketch.hpp"

namespace kor {

// Binary sketch file, all integers and floats little-endian:
//   magic "KOR1" | version u16 | u u64 | L u16 | n u32
//   | epsilon f64 | beta f64 | p f64 | gamma f64 | eta f64 | seed 16 bytes
//   | flag u8 (0 = clean, 1 = noisy) | p_eff f64 | epsilon_eff f64
//   | merge_count u32
//   | ceil(tau/8) payload bytes, bits level-major then bucket order,
//     little-endian within bytes, trailing pad bits zero.

constexpr uint16_t kSketchFormatVersion = 1;

struct LoadedSketch {
  SketchParams params;
  std::variant<KorSketch, NoisySketch> sketch;

  bool is_noisy() const { return sketch.index() == 1; }
};

std::vector<uint8_t> serialize_sketch(const KorSketch& sketch,
                                      const SketchParams& params);
std::vector<uint8_t> serialize_sketch(const NoisySketch& sketch,
                                      const SketchParams& params);

/// Parses a sketch file. Throws CorruptHeader on a bad magic or garbled
/// fields, VersionMismatch on an unknown version, LengthMismatch when the
/// payload size disagrees with the header.
LoadedSketch deserialize_sketch(const std::vector<uint8_t>& bytes);

void save_sketch_file(const std::string& path,
                      const std::vector<uint8_t>& bytes);
std::vector<uint8_t> read_binary_file(const std::string& path);

namespace detail {
/// The canonical 76-byte params header; also the digest preimage.
std::vector<uint8_t> encode_params_header(const SketchParams& params);
}  // namespace detail

}  // namespace kor
