//
// Copyright 2026 The oneshot-topk Authors
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

#include "oneshot/rng.h"

namespace oneshot {
namespace {

constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// SplitMix64 finalizer.
uint64_t Mix(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

RngState::RngState(uint64_t seed, uint64_t stream)
    : seed_(seed),
      stream_(stream),
      state_(Mix(seed + kGolden) ^ Mix(stream * kGolden + 1)) {}

uint64_t RngState::NextBits() {
  state_ += kGolden;
  return Mix(state_);
}

double RngState::NextUniform() {
  // 52 random bits centered in their cell: values lie in
  // [2^-53, 1 - 2^-53], never exactly 0 or 1.
  return (static_cast<double>(NextBits() >> 12) + 0.5) * 0x1.0p-52;
}

RngState RngState::Substream(uint64_t index) const {
  return RngState(seed_, Mix(stream_ ^ (index + kGolden)));
}

}  // namespace oneshot
