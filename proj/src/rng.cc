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

#include "dpsprt/rng.h"

#include <cstdint>

namespace dpsprt {
namespace {

constexpr uint32_t kPhiloxM0 = 0xD2511F53;
constexpr uint32_t kPhiloxM1 = 0xCD9E8D57;
constexpr uint32_t kPhiloxW0 = 0x9E3779B9;
constexpr uint32_t kPhiloxW1 = 0xBB67AE85;

inline void MulHiLo(uint32_t a, uint32_t b, uint32_t* hi, uint32_t* lo) {
  const uint64_t product = static_cast<uint64_t>(a) * b;
  *hi = static_cast<uint32_t>(product >> 32);
  *lo = static_cast<uint32_t>(product);
}

}  // namespace

std::array<uint32_t, 4> Philox4x32(std::array<uint32_t, 4> ctr,
                                   std::array<uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    uint32_t hi0, lo0, hi1, lo1;
    MulHiLo(kPhiloxM0, ctr[0], &hi0, &lo0);
    MulHiLo(kPhiloxM1, ctr[2], &hi1, &lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kPhiloxW0;
    key[1] += kPhiloxW1;
  }
  return ctr;
}

RandomStream::RandomStream(const StreamKey& key)
    : key_{static_cast<uint32_t>(key.master_seed),
           static_cast<uint32_t>(key.master_seed >> 32)},
      trial_(key.trial),
      tag_word_(((key.variant_id & kMaxVariantId) << 8) |
                static_cast<uint32_t>(key.tag)) {}

void RandomStream::Refill() {
  buffer_ = Philox4x32({static_cast<uint32_t>(block_),
                        static_cast<uint32_t>(block_ >> 32), trial_, tag_word_},
                       key_);
  ++block_;
  buffered_words_ = 4;
}

uint64_t RandomStream::NextU64() {
  if (buffered_words_ < 2) Refill();
  const int i = 4 - buffered_words_;
  buffered_words_ -= 2;
  return (static_cast<uint64_t>(buffer_[i]) << 32) | buffer_[i + 1];
}

double RandomStream::NextDouble() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

double RandomStream::NextOpenDouble() {
  return (static_cast<double>(NextU64() >> 11) + 0.5) * 0x1.0p-53;
}

uint32_t VariantStreamId(const char* label, size_t size) {
  uint64_t hash = 0xcbf29ce484222325ULL;
  for (size_t i = 0; i < size; ++i) {
    hash ^= static_cast<unsigned char>(label[i]);
    hash *= 0x100000001b3ULL;
  }
  return static_cast<uint32_t>((hash >> 24) ^ hash) & kMaxVariantId;
}

}  // namespace dpsprt
