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

#ifndef ONESHOT_RNG_H_
#define ONESHOT_RNG_H_

#include <cstdint>

namespace oneshot {

// Counter-based pseudo-random generator (SplitMix64 output function over a
// (seed, stream)-derived key). Identical (seed, stream) pairs reproduce
// identical draw sequences on any platform; disjoint streams derived via
// Substream() let Monte Carlo trials run in parallel without shared state.
class RngState {
 public:
  explicit RngState(uint64_t seed, uint64_t stream = 0);

  // Next 64 uniformly random bits.
  uint64_t NextBits();

  // Next uniform double, strictly inside (0, 1).
  double NextUniform();

  // Independent generator for sub-trial `index`, decorrelated from this
  // stream and from other indices. Does not advance this generator.
  RngState Substream(uint64_t index) const;

  uint64_t seed() const { return seed_; }
  uint64_t stream() const { return stream_; }

 private:
  uint64_t seed_;
  uint64_t stream_;
  uint64_t state_;
};

}  // namespace oneshot

#endif  // ONESHOT_RNG_H_
