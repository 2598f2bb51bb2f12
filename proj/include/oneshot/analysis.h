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

#ifndef ONESHOT_ANALYSIS_H_
#define ONESHOT_ANALYSIS_H_

#include <cstdint>
#include <vector>

#include "oneshot/mechanisms.h"
#include "oneshot/noise.h"
#include "oneshot/rng.h"

namespace oneshot {

// Constants of the concentration machinery behind the sqrt(k) calibration,
// exposed by name so regime checks (k >= kC0 * log(m/delta),
// tau <= epsilon / (kC1 * sqrt(k log(m/delta)))) are testable.
inline constexpr double kC0 = 3.9 * 3.9;
inline constexpr double kC1 = 1.95;
inline constexpr double kBennettC = 1.9;

// Minimum consecutive gap of the sorted counts (m >= 2).
double MinGap(const CountVector& x);

// Probability that the oneshot mechanism recovers the true index set when
// the sorted counts have minimum gap `gap`:
// p = max{0, 1 - (m-1)(2 lambda + gap) e^{-gap/lambda} / (4 lambda)}.
double UtilityBound(int64_t m, const NoiseScale& scale, double gap);

// Exact probability that the oneshot min-selection outputs exactly
// `outcome_set` (distinct 0-based indices, |S| = k <= m <= 20). Conditions on
// which j in S carries the k-th smallest noisy value with noise g and
// integrates the product of Laplace CDF terms over g by adaptive quadrature,
// splitting at the CDF and density kinks. Throws NumericError if the
// quadrature error estimate exceeds 1e-10.
double ExactOutcomeProbability(const CountVector& x,
                               const std::vector<int>& outcome_set,
                               const NoiseScale& scale);

// True iff |q[i] - q2[i]| <= tau * q[i] (1 - q[i]) for every coordinate.
// Note the asymmetry: the tolerance envelope comes from the first argument.
bool IsTauClose(const std::vector<double>& q, const std::vector<double>& q2,
                double tau);

// Evaluates |G(z2) - G(z)| <= 2 e^{|z2-z|} |z2-z| G(z)(1 - G(z)) and returns
// whether it holds (G the standard Laplace CDF).
bool CdfLipschitzBoundHolds(double z, double z2);

// Includes each index i independently with probability q[i] (0 < q[i] < 1);
// returns the included indices ascending. Consumes one uniform per index.
std::vector<int> BernoulliSubsetMechanism(const std::vector<double>& q,
                                          RngState& rng);

// Bennett function h(u) = (1 + u) log(1 + u) - u, u >= 0.
double BennettH(double u);

// Upper bound on P(sum of independent Bernoulli(q[i]) <= k) when
// sum q[i] >= (1 + t) k, t > 0:  exp(-(1 + t) k h(t / (t + 1))).
double PoissonBinomialTailBound(const std::vector<double>& q, int k, double t);

// Exact P(sum of independent Bernoulli(q[i]) <= k) by the standard O(m k)
// convolution recursion in probability space (length <= 1e4).
double PoissonBinomialExactTail(const std::vector<double>& q, int k);

}  // namespace oneshot

#endif  // ONESHOT_ANALYSIS_H_
