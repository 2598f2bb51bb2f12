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

#include "oneshot/noise.h"

#include <cmath>

#include "oneshot/errors.h"

namespace oneshot {

NoiseScale::NoiseScale(double lambda) : lambda_(lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw InvalidParameterError("noise scale lambda must be positive and finite");
  }
}

double LaplaceCdf(double z) {
  return z <= 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
}

double LaplaceSf(double z) {
  return z >= 0.0 ? 0.5 * std::exp(-z) : 1.0 - 0.5 * std::exp(z);
}

double LaplaceQuantile(double u) {
  if (!(u > 0.0) || !(u < 1.0)) {
    throw InvalidParameterError("Laplace quantile requires u strictly in (0,1)");
  }
  return u < 0.5 ? std::log(2.0 * u) : -std::log(2.0 * (1.0 - u));
}

double LaplaceDensity(double z, const NoiseScale& scale) {
  const double lambda = scale.value();
  return 0.5 / lambda * std::exp(-std::fabs(z) / lambda);
}

double SampleLaplace(const NoiseScale& scale, RngState& rng) {
  return scale.value() * LaplaceQuantile(rng.NextUniform());
}

double LaplaceDiffDensity(double z, const NoiseScale& scale) {
  const double lambda = scale.value();
  const double a = std::fabs(z);
  return (lambda + a) / (4.0 * lambda * lambda) * std::exp(-a / lambda);
}

double SampleGumbel(double scale, RngState& rng) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw InvalidParameterError("Gumbel scale must be positive and finite");
  }
  return scale * -std::log(-std::log(rng.NextUniform()));
}

}  // namespace oneshot
