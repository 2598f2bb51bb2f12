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

#include "oneshot/analysis.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "oneshot/errors.h"
#include "oneshot/quadrature.h"

namespace oneshot {
namespace {

constexpr double kOutcomeQuadratureTol = 1e-10;
constexpr int kExactOracleMaxM = 20;

void ValidateProbabilityVector(const std::vector<double>& q) {
  if (q.empty()) {
    throw InvalidParameterError("probability vector must be nonempty");
  }
  for (double v : q) {
    if (!(v > 0.0) || !(v < 1.0)) {
      throw InvalidParameterError(
          "probability vector entries must lie strictly in (0,1)");
    }
  }
}

}  // namespace

double MinGap(const CountVector& x) {
  if (x.size() < 2) {
    throw InvalidParameterError("min gap requires at least two counts");
  }
  CountVector sorted = x;
  std::sort(sorted.begin(), sorted.end());
  double gap = sorted[1] - sorted[0];
  for (size_t i = 2; i < sorted.size(); ++i) {
    gap = std::min(gap, sorted[i] - sorted[i - 1]);
  }
  return gap;
}

double UtilityBound(int64_t m, const NoiseScale& scale, double gap) {
  if (m < 2) {
    throw InvalidParameterError("utility bound requires m >= 2");
  }
  if (!(gap >= 0.0)) {
    throw InvalidParameterError("gap must be nonnegative");
  }
  const double lambda = scale.value();
  const double miss = static_cast<double>(m - 1) * (2.0 * lambda + gap) *
                      std::exp(-gap / lambda) / (4.0 * lambda);
  return std::max(0.0, 1.0 - miss);
}

double ExactOutcomeProbability(const CountVector& x,
                               const std::vector<int>& outcome_set,
                               const NoiseScale& scale) {
  const int m = static_cast<int>(x.size());
  if (m < 1) {
    throw InvalidParameterError("count vector must be nonempty");
  }
  if (m > kExactOracleMaxM) {
    throw ResourceError("exact outcome oracle is limited to m <= 20");
  }
  const int k = static_cast<int>(outcome_set.size());
  if (k < 1 || k > m) {
    throw InvalidParameterError("outcome set size must lie in [1, m]");
  }
  std::vector<bool> selected(m, false);
  for (int idx : outcome_set) {
    if (idx < 0 || idx >= m || selected[idx]) {
      throw InvalidParameterError("outcome set must hold distinct indices in [0, m)");
    }
    selected[idx] = true;
  }

  const double lambda = scale.value();
  const NoiseScale unit(1.0);

  // Condition on j carrying the k-th smallest noisy value with noise g:
  // every other selected index must fall below x_j + g, every unselected one
  // above. The integrand has kinks at g = 0 (noise density) and at
  // g = x_i - x_j (CDF arguments crossing 0), so each smooth piece is
  // integrated separately.
  double total = 0.0;
  double total_err = 0.0;
  for (int j : outcome_set) {
    std::vector<double> breakpoints;
    breakpoints.reserve(m + 2);
    double lo = 0.0, hi = 0.0;
    for (int i = 0; i < m; ++i) {
      const double kink = x[i] - x[j];
      lo = std::min(lo, kink);
      hi = std::max(hi, kink);
      if (i != j) breakpoints.push_back(kink);
    }
    breakpoints.push_back(0.0);
    lo -= 50.0 * lambda;
    hi += 50.0 * lambda;
    breakpoints.push_back(lo);
    breakpoints.push_back(hi);
    breakpoints.erase(
        std::remove_if(breakpoints.begin(), breakpoints.end(),
                       [lo, hi](double b) { return b < lo || b > hi; }),
        breakpoints.end());

    const auto integrand = [&](double g) {
      double density = LaplaceDensity(g, scale);
      for (int i = 0; i < m; ++i) {
        if (i == j) continue;
        const double z = (x[j] + g - x[i]) / lambda;
        density *= selected[i] ? LaplaceCdf(z) : LaplaceSf(z);
      }
      return density;
    };

    const QuadratureResult piece =
        IntegratePiecewise(integrand, breakpoints, kOutcomeQuadratureTol / k);
    total += piece.value;
    total_err += piece.error;
  }
  if (total_err > kOutcomeQuadratureTol) {
    throw NumericError("outcome probability quadrature error estimate " +
                       std::to_string(total_err) + " exceeds 1e-10");
  }
  return total;
}

bool IsTauClose(const std::vector<double>& q, const std::vector<double>& q2,
                double tau) {
  if (q.size() != q2.size()) {
    throw InvalidParameterError("tau-closeness requires equal-length vectors");
  }
  if (!(tau >= 0.0)) {
    throw InvalidParameterError("tau must be nonnegative");
  }
  ValidateProbabilityVector(q);
  for (size_t i = 0; i < q.size(); ++i) {
    if (std::fabs(q[i] - q2[i]) > tau * q[i] * (1.0 - q[i])) {
      return false;
    }
  }
  return true;
}

bool CdfLipschitzBoundHolds(double z, double z2) {
  if (!std::isfinite(z) || !std::isfinite(z2)) {
    throw InvalidParameterError("inputs must be finite");
  }
  // |G(z2) - G(z)| = |Sf(z) - Sf(z2)|; the survival form keeps precision in
  // the right tail where both CDF values round to 1.
  const double lhs = std::fabs(LaplaceSf(z) - LaplaceSf(z2));
  const double dz = std::fabs(z2 - z);
  const double rhs = 2.0 * std::exp(dz) * dz * LaplaceCdf(z) * LaplaceSf(z);
  return lhs <= rhs;
}

std::vector<int> BernoulliSubsetMechanism(const std::vector<double>& q,
                                          RngState& rng) {
  ValidateProbabilityVector(q);
  std::vector<int> included;
  for (size_t i = 0; i < q.size(); ++i) {
    if (rng.NextUniform() < q[i]) {
      included.push_back(static_cast<int>(i));
    }
  }
  return included;
}

double BennettH(double u) {
  if (!(u >= 0.0)) {
    throw InvalidParameterError("Bennett h requires u >= 0");
  }
  return (1.0 + u) * std::log1p(u) - u;
}

double PoissonBinomialTailBound(const std::vector<double>& q, int k, double t) {
  ValidateProbabilityVector(q);
  if (k < 0) {
    throw InvalidParameterError("k must be nonnegative");
  }
  if (!(t > 0.0)) {
    throw InvalidParameterError("t must be positive");
  }
  double sum = 0.0;
  for (double v : q) sum += v;
  if (sum < (1.0 + t) * k) {
    throw InvalidParameterError(
        "tail bound requires sum(q) >= (1 + t) k; got sum=" +
        std::to_string(sum));
  }
  return std::exp(-(1.0 + t) * k * BennettH(t / (t + 1.0)));
}

double PoissonBinomialExactTail(const std::vector<double>& q, int k) {
  ValidateProbabilityVector(q);
  if (q.size() > 10000) {
    throw ResourceError("exact Poisson-binomial tail is limited to m <= 1e4");
  }
  if (k < 0) return 0.0;
  const int cap = std::min<int>(k, static_cast<int>(q.size()));

  // dp[j] = P(first i variables sum to j), j capped at `cap`; mass moving
  // past the cap is never needed for the lower tail.
  std::vector<double> dp(cap + 1, 0.0);
  dp[0] = 1.0;
  for (double p : q) {
    for (int j = cap; j >= 1; --j) {
      dp[j] = dp[j] * (1.0 - p) + dp[j - 1] * p;
    }
    dp[0] *= 1.0 - p;
  }

  // Kahan summation for the final tail.
  double tail = 0.0, carry = 0.0;
  for (double v : dp) {
    const double y = v - carry;
    const double s = tail + y;
    carry = (s - tail) - y;
    tail = s;
  }
  return std::min(tail, 1.0);
}

}  // namespace oneshot
