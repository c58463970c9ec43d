//
// Copyright 2026 The dpsprt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef DPSPRT_RNG_H_
#define DPSPRT_RNG_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>

namespace dpsprt {

// Independent purposes a single trial draws randomness for. Each has its own
// non-overlapping stream; changing the noise family never shifts the
// observation sequence.
enum class Substream : uint8_t {
  kObs = 0,
  kNoiseY = 1,
  kNoiseZ = 2,
  kSubsample = 3,
  kPilot = 4,
};

// Identifies one random stream. Distinct keys map to distinct Philox
// counter blocks, so streams never overlap.
struct StreamKey {
  uint64_t master_seed = 0;
  uint32_t variant_id = 0;  // Only the low 24 bits are used.
  uint32_t trial = 0;
  Substream tag = Substream::kObs;
};

inline constexpr uint32_t kMaxVariantId = (1u << 24) - 1;

// Philox4x32-10 block function (Salmon et al., SC'11). Exposed for known-answer
// tests.
std::array<uint32_t, 4> Philox4x32(std::array<uint32_t, 4> counter,
                                   std::array<uint32_t, 2> key);

// Counter-based random stream. The state transition is integer-only, so a
// given key yields the same bytes on every platform. Satisfies
// UniformRandomBitGenerator.
class RandomStream {
 public:
  using result_type = uint64_t;

  explicit RandomStream(const StreamKey& key);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() { return NextU64(); }

  uint64_t NextU64();

  // Uniform on [0, 1) with 53 random bits.
  double NextDouble();

  // Uniform on the open interval (0, 1); never returns 0 or 1.
  double NextOpenDouble();

  uint64_t blocks_consumed() const { return block_; }

 private:
  void Refill();

  std::array<uint32_t, 2> key_;
  uint32_t trial_;
  uint32_t tag_word_;
  uint64_t block_ = 0;
  std::array<uint32_t, 4> buffer_{};
  int buffered_words_ = 0;
};

// Pure derivation; equivalent to constructing a RandomStream.
inline RandomStream Derive(const StreamKey& key) { return RandomStream(key); }

// 24-bit stream identifier for a textual variant label (FNV-1a, folded).
// Position-independent, so reordering variants in a plan leaves each
// variant's randomness unchanged.
uint32_t VariantStreamId(const char* label, size_t size);

}  // namespace dpsprt

#endif  // DPSPRT_RNG_H_
