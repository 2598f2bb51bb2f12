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

#ifndef ONESHOT_NOISE_H_
#define ONESHOT_NOISE_H_

#include "oneshot/rng.h"

namespace oneshot {

// Scale parameter lambda of a Laplace distribution; guaranteed positive and
// finite by construction, so downstream samplers need no further checks.
class NoiseScale {
 public:
  explicit NoiseScale(double lambda);
  double value() const { return lambda_; }

 private:
  double lambda_;
};

// CDF of the standard Laplace distribution:
// G(z) = e^z / 2 for z <= 0, 1 - e^{-z} / 2 for z >= 0.
double LaplaceCdf(double z);

// Survival function 1 - G(z), computed without cancellation for large z.
double LaplaceSf(double z);

// Inverse of LaplaceCdf; u must lie strictly inside (0, 1).
double LaplaceQuantile(double u);

// Density of a single Laplace(lambda) variable at z.
double LaplaceDensity(double z, const NoiseScale& scale);

// One Laplace(lambda) draw by inverse-CDF transform of a single uniform,
// so that LaplaceCdf(draw / lambda) replays the uniform exactly.
double SampleLaplace(const NoiseScale& scale, RngState& rng);

// Density of X - Y for independent X, Y ~ Laplace(lambda):
// f_Z(z) = (lambda + |z|) / (4 lambda^2) * exp(-|z| / lambda).
double LaplaceDiffDensity(double z, const NoiseScale& scale);

// One standard Gumbel draw times `scale` (scale > 0).
double SampleGumbel(double scale, RngState& rng);

}  // namespace oneshot

#endif  // ONESHOT_NOISE_H_
