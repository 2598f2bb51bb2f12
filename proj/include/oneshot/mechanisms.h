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

#ifndef ONESHOT_MECHANISMS_H_
#define ONESHOT_MECHANISMS_H_

#include <vector>

#include "oneshot/noise.h"
#include "oneshot/rng.h"

namespace oneshot {

// The m real-valued query answers to select from. Indices are 0-based
// throughout the library; external interfaces (files, CLI output) are
// 1-based and convert at the boundary.
using CountVector = std::vector<double>;

// Parameters of an (epsilon, delta) selection task. The bounds mirror the
// regime in which the approximate calibration below is guaranteed:
// 0 < epsilon <= 0.2, 0 < delta <= 0.05, m >= 2, 1 <= k <= m,
// sensitivity > 0.
struct PrivacyParams {
  double epsilon = 0.0;
  double delta = 0.0;
  int k = 0;
  int m = 0;
  double sensitivity = 1.0;
};

// Throws InvalidParameterError naming the violated bound.
void ValidatePrivacyParams(const PrivacyParams& params);

// Output of the oneshot selection: an unordered index set of size k (stored
// ascending) plus, per selected index, an estimate formed from the true value
// and fresh independent noise (never the noise that won the selection).
struct TopKSelection {
  std::vector<int> indices;
  std::vector<double> estimates;  // estimates[i] belongs to indices[i]
  NoiseScale noise_scale;
};

// Noise scale for pure epsilon-DP selection of k elements:
// lambda = 2 k s_f / epsilon.
NoiseScale CalibratePure(int k, double sensitivity, double epsilon);

// Noise scale for (epsilon, delta)-DP selection:
// lambda = 8 s_f sqrt(k ln(m / delta)) / epsilon  (natural log).
NoiseScale CalibrateApprox(const PrivacyParams& params);
NoiseScale CalibrateApprox(int k, int m, double delta, double epsilon,
                           double sensitivity);

// Oneshot Laplace mechanism: adds one Laplace(lambda) draw to every count,
// returns the indices of the k smallest noisy counts as a set, plus estimates
// that re-noise the true values at the selected indices with fresh draws.
// Consumes m + k draws from rng: selection noise in index order, then fresh
// noise in ascending selected-index order. Noisy-value ties break toward the
// smaller index.
TopKSelection OneshotSelectMin(const CountVector& x, int k,
                               const NoiseScale& scale, RngState& rng);

// Max variant: OneshotSelectMin on the negated counts, estimates negated
// back. Identical rng consumption.
TopKSelection OneshotSelectMax(const CountVector& x, int k,
                               const NoiseScale& scale, RngState& rng);

struct NoisyMinResult {
  int index = 0;
  double estimate = 0.0;
};

// Report Noisy Min: OneshotSelectMin with k = 1.
NoisyMinResult ReportNoisyMin(const CountVector& x, const NoiseScale& scale,
                              RngState& rng);

// Peeling baseline: k rounds of ReportNoisyMin, each on the indices not yet
// selected, with fresh noise per round at the caller-supplied per-round
// scale (privacy composition across rounds is the caller's accounting).
// Returns selections in discovery order.
std::vector<NoisyMinResult> PeelingSelect(const CountVector& x, int k,
                                          const NoiseScale& per_round_scale,
                                          RngState& rng);

// Gumbel baseline: adds i.i.d. scale * Gumbel noise once and returns the
// indices of the k smallest noisy counts ordered by noisy value (the report
// order is part of the output, unlike the set-valued mechanism above).
std::vector<int> GumbelOneshotSelect(const CountVector& x, int k, double scale,
                                     RngState& rng);

namespace internal {

// Selection core shared by the mechanisms and the Monte Carlo auditors:
// noisy values and the ascending index set of the k smallest, without the
// fresh-noise estimates. `noisy` is scratch reused across calls.
void NoisyMinIndices(const CountVector& x, int k, const NoiseScale& scale,
                     RngState& rng, std::vector<double>& noisy,
                     std::vector<int>& indices);

}  // namespace internal

}  // namespace oneshot

#endif  // ONESHOT_MECHANISMS_H_
