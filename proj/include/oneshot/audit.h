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

#ifndef ONESHOT_AUDIT_H_
#define ONESHOT_AUDIT_H_

#include <cmath>
#include <cstdint>
#include <vector>

#include "oneshot/mechanisms.h"
#include "oneshot/noise.h"
#include "oneshot/rng.h"

namespace oneshot {

// A pair of inputs adjacent under the infinity-norm convention:
// same length and |x[i] - x2[i]| <= sensitivity for every i.
struct AdjacentPair {
  CountVector x;
  CountVector x2;
  double sensitivity = 1.0;
};

// Throws InvalidParameterError if the pair is not adjacent.
void ValidateAdjacentPair(const AdjacentPair& pair);

enum class AuditMethod { kExactQuadrature, kMonteCarlo };

// Certified (exact) or estimated (Monte Carlo) privacy loss of the oneshot
// min-selection on one adjacent pair, at a fixed delta. Only the index set is
// audited; the fresh-noise estimates are standard Laplace releases covered by
// their own property test, and excluding them keeps the outcome space finite.
struct AuditReport {
  double epsilon_hat = 0.0;        // certified / conservative upper value
  double epsilon_hat_lower = 0.0;  // Monte Carlo: anti-conservative envelope
  double delta = 0.0;
  AuditMethod method = AuditMethod::kExactQuadrature;
  double samples_or_tolerance = 0.0;  // trials (MC) or bisection tol (exact)
  AdjacentPair worst_pair;
  std::vector<int> worst_set;  // most discriminating outcome set
  // Filled by callers that know the target epsilon (slack = epsilon_hat /
  // target); NaN when no target was supplied.
  double target_epsilon = std::nan("");
  double slack = std::nan("");
};

// All k-subsets of {0, ..., m-1} in lexicographic order. Throws ResourceError
// when C(m, k) exceeds 2e5.
std::vector<std::vector<int>> EnumerateKSubsets(int m, int k);

// Exact outcome distribution of the oneshot min-selection over the given
// enumerated sets (one quadrature per set).
std::vector<double> OutcomeDistribution(const CountVector& x,
                                        const std::vector<std::vector<int>>& sets,
                                        const NoiseScale& scale);

// Smallest epsilon in [0, 20] (bisection to 1e-4) such that the hockey-stick
// sum  sum_s max(P(s) - e^eps Q(s), 0) <= delta  holds in both directions.
// Over a finite outcome space this is exactly the (epsilon, delta) guarantee
// against any output set, and it is tighter than per-singleton checks.
double EpsilonHatFromTables(const std::vector<double>& p,
                            const std::vector<double>& q, double delta);

// Exact audit: outcome distributions for both inputs by quadrature, then the
// bisection above.
AuditReport EpsilonHatExact(const AdjacentPair& pair, int k,
                            const NoiseScale& scale, double delta);

// Sampled audit: per-set frequencies with 99% Clopper-Pearson intervals
// (Bonferroni-corrected across all sets and both inputs). epsilon_hat is
// computed on the conservative envelope (upper P against lower Q, both
// directions); epsilon_hat_lower on the anti-conservative one. trials >= 1e4.
// Trial t draws from rng.Substream(t), so results are independent of jobs.
AuditReport EpsilonHatMonteCarlo(const AdjacentPair& pair, int k,
                                 const NoiseScale& scale, double delta,
                                 int64_t trials, RngState& rng, int jobs = 1);

// Adjacent inputs at distance exactly `sensitivity`: all 2^m sign corners
// x + s*v, v in {-1, +1}^m, when 2^m <= limit (and m <= 20); otherwise the
// two structured corners that push the lower half of the sorted values down
// and the upper half up, and the reverse.
std::vector<CountVector> AdjacentCorners(const CountVector& x,
                                         double sensitivity, int64_t limit);

}  // namespace oneshot

#endif  // ONESHOT_AUDIT_H_
