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

#include "oneshot/mechanisms.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "oneshot/errors.h"

namespace oneshot {
namespace {

void ValidateCounts(const CountVector& x) {
  if (x.empty()) {
    throw InvalidParameterError("count vector must be nonempty");
  }
  for (double v : x) {
    if (!std::isfinite(v)) {
      throw InvalidParameterError("count vector entries must be finite");
    }
  }
}

void ValidateK(const CountVector& x, int k) {
  if (k < 1 || static_cast<size_t>(k) > x.size()) {
    throw InvalidParameterError("k must satisfy 1 <= k <= m, got k=" +
                                std::to_string(k) + ", m=" +
                                std::to_string(x.size()));
  }
}

}  // namespace

void ValidatePrivacyParams(const PrivacyParams& params) {
  if (!(params.epsilon > 0.0) || params.epsilon > 0.2) {
    throw InvalidParameterError("epsilon must lie in (0, 0.2], got " +
                                std::to_string(params.epsilon));
  }
  if (!(params.delta > 0.0) || params.delta > 0.05) {
    throw InvalidParameterError("delta must lie in (0, 0.05], got " +
                                std::to_string(params.delta));
  }
  if (params.m < 2) {
    throw InvalidParameterError("m must be at least 2, got " +
                                std::to_string(params.m));
  }
  if (params.k < 1 || params.k > params.m) {
    throw InvalidParameterError("k must lie in [1, m], got k=" +
                                std::to_string(params.k) + ", m=" +
                                std::to_string(params.m));
  }
  if (!(params.sensitivity > 0.0) || !std::isfinite(params.sensitivity)) {
    throw InvalidParameterError("sensitivity must be positive and finite");
  }
}

NoiseScale CalibratePure(int k, double sensitivity, double epsilon) {
  if (k < 1) {
    throw InvalidParameterError("k must be at least 1");
  }
  if (!(sensitivity > 0.0) || !std::isfinite(sensitivity)) {
    throw InvalidParameterError("sensitivity must be positive and finite");
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InvalidParameterError("epsilon must be positive and finite");
  }
  return NoiseScale(2.0 * k * sensitivity / epsilon);
}

NoiseScale CalibrateApprox(int k, int m, double delta, double epsilon,
                           double sensitivity) {
  if (k < 1) {
    throw InvalidParameterError("k must be at least 1");
  }
  if (!(sensitivity > 0.0) || !std::isfinite(sensitivity)) {
    throw InvalidParameterError("sensitivity must be positive and finite");
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InvalidParameterError("epsilon must be positive and finite");
  }
  if (!(delta > 0.0) || !(static_cast<double>(m) / delta > 1.0)) {
    throw InvalidParameterError("m/delta must exceed 1");
  }
  return NoiseScale(8.0 * sensitivity * std::sqrt(k * std::log(m / delta)) /
                    epsilon);
}

NoiseScale CalibrateApprox(const PrivacyParams& params) {
  return CalibrateApprox(params.k, params.m, params.delta, params.epsilon,
                         params.sensitivity);
}

namespace internal {

void NoisyMinIndices(const CountVector& x, int k, const NoiseScale& scale,
                     RngState& rng, std::vector<double>& noisy,
                     std::vector<int>& indices) {
  const int m = static_cast<int>(x.size());
  noisy.resize(m);
  for (int i = 0; i < m; ++i) {
    noisy[i] = x[i] + SampleLaplace(scale, rng);
  }
  indices.resize(m);
  std::iota(indices.begin(), indices.end(), 0);
  // Ties (possible in floating point) break toward the smaller index.
  const auto lower = [&noisy](int a, int b) {
    return noisy[a] < noisy[b] || (noisy[a] == noisy[b] && a < b);
  };
  if (k < m) {
    std::nth_element(indices.begin(), indices.begin() + (k - 1), indices.end(),
                     lower);
  }
  indices.resize(k);
  std::sort(indices.begin(), indices.end());
}

}  // namespace internal

TopKSelection OneshotSelectMin(const CountVector& x, int k,
                               const NoiseScale& scale, RngState& rng) {
  ValidateCounts(x);
  ValidateK(x, k);
  std::vector<double> noisy;
  std::vector<int> indices;
  internal::NoisyMinIndices(x, k, scale, rng, noisy, indices);
  std::vector<double> estimates(indices.size());
  for (size_t i = 0; i < indices.size(); ++i) {
    estimates[i] = x[indices[i]] + SampleLaplace(scale, rng);
  }
  return TopKSelection{std::move(indices), std::move(estimates), scale};
}

TopKSelection OneshotSelectMax(const CountVector& x, int k,
                               const NoiseScale& scale, RngState& rng) {
  CountVector negated(x.size());
  std::transform(x.begin(), x.end(), negated.begin(),
                 [](double v) { return -v; });
  TopKSelection result = OneshotSelectMin(negated, k, scale, rng);
  for (double& e : result.estimates) e = -e;
  return result;
}

NoisyMinResult ReportNoisyMin(const CountVector& x, const NoiseScale& scale,
                              RngState& rng) {
  const TopKSelection selection = OneshotSelectMin(x, 1, scale, rng);
  return NoisyMinResult{selection.indices[0], selection.estimates[0]};
}

std::vector<NoisyMinResult> PeelingSelect(const CountVector& x, int k,
                                          const NoiseScale& per_round_scale,
                                          RngState& rng) {
  ValidateCounts(x);
  ValidateK(x, k);
  std::vector<int> remaining(x.size());
  std::iota(remaining.begin(), remaining.end(), 0);

  std::vector<NoisyMinResult> out;
  out.reserve(k);
  CountVector round_values;
  for (int round = 0; round < k; ++round) {
    round_values.clear();
    for (int idx : remaining) round_values.push_back(x[idx]);
    const NoisyMinResult local = ReportNoisyMin(round_values, per_round_scale, rng);
    const int original = remaining[local.index];
    out.push_back(NoisyMinResult{original, local.estimate});
    remaining.erase(remaining.begin() + local.index);
  }
  return out;
}

std::vector<int> GumbelOneshotSelect(const CountVector& x, int k, double scale,
                                     RngState& rng) {
  ValidateCounts(x);
  ValidateK(x, k);
  const int m = static_cast<int>(x.size());
  std::vector<double> noisy(m);
  for (int i = 0; i < m; ++i) {
    noisy[i] = x[i] + SampleGumbel(scale, rng);
  }
  std::vector<int> indices(m);
  std::iota(indices.begin(), indices.end(), 0);
  const auto lower = [&noisy](int a, int b) {
    return noisy[a] < noisy[b] || (noisy[a] == noisy[b] && a < b);
  };
  std::partial_sort(indices.begin(), indices.begin() + k, indices.end(), lower);
  indices.resize(k);
  return indices;
}

}  // namespace oneshot
