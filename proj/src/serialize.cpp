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

#include "kor/serialize.hpp"

#include <cstring>
#include <fstream>

#include "kor/errors.hpp"

namespace kor {

namespace {

constexpr char kMagic[4] = {'K', 'O', 'R', '1'};
constexpr size_t kHeaderSize = 76;
constexpr size_t kNoiseBlockSize = 1 + 8 + 8 + 4;

void put_u16(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v));
  out.push_back(static_cast<uint8_t>(v >> 8));
}

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<uint8_t>& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void put_f64(std::vector<uint8_t>& out, double v) {
  uint64_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  put_u64(out, bits);
}

class Reader {
 public:
  explicit Reader(const std::vector<uint8_t>& bytes) : bytes_(bytes) {}

  uint16_t u16() { return static_cast<uint16_t>(u(2)); }
  uint32_t u32() { return static_cast<uint32_t>(u(4)); }
  uint64_t u64() { return u(8); }

  double f64() {
    const uint64_t bits = u64();
    double v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
  }

  uint8_t byte() {
    need(1);
    return bytes_[pos_++];
  }

  void raw(uint8_t* dst, size_t len) {
    need(len);
    std::memcpy(dst, bytes_.data() + pos_, len);
    pos_ += len;
  }

  size_t remaining() const { return bytes_.size() - pos_; }
  size_t pos() const { return pos_; }

 private:
  uint64_t u(size_t len) {
    need(len);
    uint64_t v = 0;
    for (size_t i = 0; i < len; ++i) {
      v |= static_cast<uint64_t>(bytes_[pos_ + i]) << (8 * i);
    }
    pos_ += len;
    return v;
  }

  void need(size_t len) {
    if (pos_ + len > bytes_.size()) {
      throw LengthMismatch("file truncated at offset " + std::to_string(pos_));
    }
  }

  const std::vector<uint8_t>& bytes_;
  size_t pos_ = 0;
};

void append_noise_block(std::vector<uint8_t>& out, uint8_t flag,
                        const NoiseState& noise) {
  out.push_back(flag);
  put_f64(out, noise.p_eff);
  put_f64(out, noise.epsilon_eff);
  put_u32(out, noise.merge_count);
}

std::vector<uint8_t> serialize_common(const BitMatrix& bits,
                                      const ParamsDigest& digest,
                                      const SketchParams& params, uint8_t flag,
                                      const NoiseState& noise) {
  if (digest != params_digest(params)) {
    throw ParamsMismatch("sketch does not belong to the given params");
  }
  std::vector<uint8_t> out = detail::encode_params_header(params);
  append_noise_block(out, flag, noise);
  const std::vector<uint8_t> payload = bits.to_bytes();
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

}  // namespace

namespace detail {

std::vector<uint8_t> encode_params_header(const SketchParams& params) {
  std::vector<uint8_t> out;
  out.reserve(kHeaderSize);
  out.insert(out.end(), kMagic, kMagic + 4);
  put_u16(out, kSketchFormatVersion);
  put_u64(out, params.universe_size);
  put_u16(out, params.num_levels);
  put_u32(out, params.buckets_per_level);
  put_f64(out, params.epsilon);
  put_f64(out, params.beta);
  put_f64(out, params.flip_prob);
  put_f64(out, params.gamma);
  put_f64(out, params.eta);
  out.insert(out.end(), params.seed.bytes.begin(), params.seed.bytes.end());
  return out;
}

}  // namespace detail

std::vector<uint8_t> serialize_sketch(const KorSketch& sketch,
                                      const SketchParams& params) {
  return serialize_common(sketch.bits, sketch.digest, params, 0, NoiseState{});
}

std::vector<uint8_t> serialize_sketch(const NoisySketch& sketch,
                                      const SketchParams& params) {
  return serialize_common(sketch.bits, sketch.digest, params, 1, sketch.noise);
}

LoadedSketch deserialize_sketch(const std::vector<uint8_t>& bytes) {
  Reader r(bytes);
  char magic[4];
  r.raw(reinterpret_cast<uint8_t*>(magic), 4);
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw CorruptHeader("bad magic");
  }
  const uint16_t version = r.u16();
  if (version != kSketchFormatVersion) {
    throw VersionMismatch("unsupported format version " +
                          std::to_string(version));
  }
  SketchParams params;
  params.universe_size = r.u64();
  params.num_levels = r.u16();
  params.buckets_per_level = r.u32();
  params.epsilon = r.f64();
  params.beta = r.f64();
  params.flip_prob = r.f64();
  params.gamma = r.f64();
  params.eta = r.f64();
  r.raw(params.seed.bytes.data(), 16);
  if (params.universe_size < 2 || params.num_levels == 0 ||
      params.buckets_per_level < 2) {
    throw CorruptHeader("implausible sketch dimensions");
  }

  const uint8_t flag = r.byte();
  if (flag > 1) throw CorruptHeader("unknown noise flag");
  NoiseState noise;
  noise.p_eff = r.f64();
  noise.epsilon_eff = r.f64();
  noise.merge_count = r.u32();

  const uint64_t tau =
      static_cast<uint64_t>(params.num_levels) * params.buckets_per_level;
  const uint64_t expected = (tau + 7) / 8;
  if (r.remaining() != expected) {
    throw LengthMismatch("payload has " + std::to_string(r.remaining()) +
                         " bytes, expected " + std::to_string(expected));
  }
  std::vector<uint8_t> payload(bytes.begin() + static_cast<long>(r.pos()),
                               bytes.end());
  BitMatrix bits = BitMatrix::from_bytes(params.num_levels,
                                         params.buckets_per_level, payload);

  LoadedSketch out;
  out.params = params;
  const ParamsDigest digest = params_digest(params);
  if (flag == 0) {
    out.sketch = KorSketch{digest, std::move(bits)};
  } else {
    out.sketch = NoisySketch{digest, std::move(bits), noise};
  }
  return out;
}

void save_sketch_file(const std::string& path,
                      const std::vector<uint8_t>& bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (!f) throw IoError("short write to " + path);
}

std::vector<uint8_t> read_binary_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary | std::ios::ate);
  if (!f) throw IoError("cannot open " + path);
  const std::streamsize size = f.tellg();
  f.seekg(0);
  std::vector<uint8_t> bytes(static_cast<size_t>(size));
  f.read(reinterpret_cast<char*>(bytes.data()), size);
  if (!f) throw IoError("short read from " + path);
  return bytes;
}

}  // namespace kor
