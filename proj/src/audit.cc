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

#include "oneshot/audit.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <thread>

#include <boost/math/distributions/binomial.hpp>

#include "oneshot/analysis.h"
#include "oneshot/errors.h"

namespace oneshot {
namespace {

constexpr double kSubsetBudget = 2e5;
constexpr double kBisectionLo = 0.0;
constexpr double kBisectionHi = 20.0;
constexpr double kBisectionTol = 1e-4;
constexpr double kMonteCarloConfidence = 0.99;

double HockeyStick(const std::vector<double>& p, const std::vector<double>& q,
                   double epsilon) {
  const double lift = std::exp(epsilon);
  double sum = 0.0;
  for (size_t s = 0; s < p.size(); ++s) {
    sum += std::max(p[s] - lift * q[s], 0.0);
  }
  return sum;
}

// Smallest epsilon in [0, 20] with sum_s max(p_s - e^eps q_s, 0) <= delta,
// to kBisectionTol. Returns the bracket top if even that is infeasible.
double EpsilonHatOneDirection(const std::vector<double>& p,
                              const std::vector<double>& q, double delta) {
  if (HockeyStick(p, q, kBisectionLo) <= delta) return kBisectionLo;
  if (HockeyStick(p, q, kBisectionHi) > delta) return kBisectionHi;
  double lo = kBisectionLo, hi = kBisectionHi;
  while (hi - lo > kBisectionTol) {
    const double mid = 0.5 * (lo + hi);
    if (HockeyStick(p, q, mid) <= delta) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

// Index of the most discriminating outcome set under tables p, q.
int WorstSetIndex(const std::vector<double>& p, const std::vector<double>& q) {
  int worst = 0;
  double worst_ratio = 0.0;
  for (size_t s = 0; s < p.size(); ++s) {
    const double a = std::max(p[s], 1e-300);
    const double b = std::max(q[s], 1e-300);
    const double ratio = std::max(a / b, b / a);
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      worst = static_cast<int>(s);
    }
  }
  return worst;
}

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

Interval ClopperPearson(int64_t successes, int64_t trials, double alpha) {
  using boost::math::binomial_distribution;
  Interval ci;
  ci.lo = binomial_distribution<double>::find_lower_bound_on_p(
      static_cast<double>(trials), static_cast<double>(successes), alpha / 2.0);
  ci.hi = binomial_distribution<double>::find_upper_bound_on_p(
      static_cast<double>(trials), static_cast<double>(successes), alpha / 2.0);
  return ci;
}

}  // namespace

void ValidateAdjacentPair(const AdjacentPair& pair) {
  if (pair.x.size() != pair.x2.size() || pair.x.empty()) {
    throw InvalidParameterError("adjacent pair requires equal nonempty lengths");
  }
  if (!(pair.sensitivity > 0.0) || !std::isfinite(pair.sensitivity)) {
    throw InvalidParameterError("sensitivity must be positive and finite");
  }
  const double slop = pair.sensitivity * 1e-12 + 1e-12;
  for (size_t i = 0; i < pair.x.size(); ++i) {
    if (!std::isfinite(pair.x[i]) || !std::isfinite(pair.x2[i])) {
      throw InvalidParameterError("pair entries must be finite");
    }
    if (std::fabs(pair.x[i] - pair.x2[i]) > pair.sensitivity + slop) {
      throw InvalidParameterError(
          "pair is not adjacent: |x[i] - x2[i]| > sensitivity at i=" +
          std::to_string(i));
    }
  }
}

std::vector<std::vector<int>> EnumerateKSubsets(int m, int k) {
  if (m < 0 || k < 0 || k > m) {
    throw InvalidParameterError("subset enumeration requires 0 <= k <= m");
  }
  double count = 1.0;
  for (int i = 0; i < k; ++i) {
    count *= static_cast<double>(m - i) / (i + 1);
    if (count > kSubsetBudget) {
      throw ResourceError("C(m,k) exceeds the 2e5 enumeration budget");
    }
  }

  std::vector<std::vector<int>> sets;
  sets.reserve(static_cast<size_t>(count) + 1);
  std::vector<int> current(k);
  std::iota(current.begin(), current.end(), 0);
  while (true) {
    sets.push_back(current);
    if (k == 0) break;
    int pos = k - 1;
    while (pos >= 0 && current[pos] == m - k + pos) --pos;
    if (pos < 0) break;
    ++current[pos];
    for (int i = pos + 1; i < k; ++i) current[i] = current[i - 1] + 1;
  }
  return sets;
}

std::vector<double> OutcomeDistribution(
    const CountVector& x, const std::vector<std::vector<int>>& sets,
    const NoiseScale& scale) {
  std::vector<double> probabilities(sets.size());
  for (size_t s = 0; s < sets.size(); ++s) {
    probabilities[s] = ExactOutcomeProbability(x, sets[s], scale);
  }
  return probabilities;
}

double EpsilonHatFromTables(const std::vector<double>& p,
                            const std::vector<double>& q, double delta) {
  if (p.size() != q.size() || p.empty()) {
    throw InvalidParameterError("tables must have equal nonzero lengths");
  }
  if (!(delta >= 0.0)) {
    throw InvalidParameterError("delta must be nonnegative");
  }
  return std::max(EpsilonHatOneDirection(p, q, delta),
                  EpsilonHatOneDirection(q, p, delta));
}

AuditReport EpsilonHatExact(const AdjacentPair& pair, int k,
                            const NoiseScale& scale, double delta) {
  ValidateAdjacentPair(pair);
  const int m = static_cast<int>(pair.x.size());
  const std::vector<std::vector<int>> sets = EnumerateKSubsets(m, k);
  const std::vector<double> p = OutcomeDistribution(pair.x, sets, scale);
  const std::vector<double> q = OutcomeDistribution(pair.x2, sets, scale);

  AuditReport report;
  report.epsilon_hat = EpsilonHatFromTables(p, q, delta);
  report.epsilon_hat_lower = report.epsilon_hat;
  report.delta = delta;
  report.method = AuditMethod::kExactQuadrature;
  report.samples_or_tolerance = kBisectionTol;
  report.worst_pair = pair;
  report.worst_set = sets[WorstSetIndex(p, q)];
  return report;
}

AuditReport EpsilonHatMonteCarlo(const AdjacentPair& pair, int k,
                                 const NoiseScale& scale, double delta,
                                 int64_t trials, RngState& rng, int jobs) {
  ValidateAdjacentPair(pair);
  if (trials < 10000) {
    throw InvalidParameterError("Monte Carlo audit requires trials >= 1e4");
  }
  const int m = static_cast<int>(pair.x.size());
  const std::vector<std::vector<int>> sets = EnumerateKSubsets(m, k);
  const size_t num_sets = sets.size();

  // Per-trial substreams keep the counts independent of the thread layout.
  const int workers = std::max(1, jobs);
  std::vector<std::vector<int64_t>> counts_x(workers,
                                             std::vector<int64_t>(num_sets, 0));
  std::vector<std::vector<int64_t>> counts_x2 = counts_x;
  const auto run_chunk = [&](int worker, int64_t begin, int64_t end) {
    std::vector<double> noisy;
    std::vector<int> indices;
    for (int64_t t = begin; t < end; ++t) {
      RngState trial_rng = rng.Substream(static_cast<uint64_t>(t));
      internal::NoisyMinIndices(pair.x, k, scale, trial_rng, noisy, indices);
      const auto it_x = std::lower_bound(sets.begin(), sets.end(), indices);
      ++counts_x[worker][it_x - sets.begin()];
      internal::NoisyMinIndices(pair.x2, k, scale, trial_rng, noisy, indices);
      const auto it_x2 = std::lower_bound(sets.begin(), sets.end(), indices);
      ++counts_x2[worker][it_x2 - sets.begin()];
    }
  };
  if (workers == 1) {
    run_chunk(0, 0, trials);
  } else {
    std::vector<std::thread> threads;
    const int64_t chunk = (trials + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const int64_t begin = w * chunk;
      const int64_t end = std::min<int64_t>(trials, begin + chunk);
      if (begin >= end) break;
      threads.emplace_back(run_chunk, w, begin, end);
    }
    for (auto& t : threads) t.join();
  }
  std::vector<int64_t> hits_x(num_sets, 0), hits_x2(num_sets, 0);
  for (int w = 0; w < workers; ++w) {
    for (size_t s = 0; s < num_sets; ++s) {
      hits_x[s] += counts_x[w][s];
      hits_x2[s] += counts_x2[w][s];
    }
  }

  // 99% Clopper-Pearson per set, Bonferroni across all sets of both inputs.
  const double alpha = (1.0 - kMonteCarloConfidence) /
                       static_cast<double>(2 * num_sets);
  std::vector<double> p_lo(num_sets), p_hi(num_sets), q_lo(num_sets),
      q_hi(num_sets);
  for (size_t s = 0; s < num_sets; ++s) {
    const Interval ci_x = ClopperPearson(hits_x[s], trials, alpha);
    const Interval ci_x2 = ClopperPearson(hits_x2[s], trials, alpha);
    p_lo[s] = ci_x.lo;
    p_hi[s] = ci_x.hi;
    q_lo[s] = ci_x2.lo;
    q_hi[s] = ci_x2.hi;
  }

  AuditReport report;
  report.epsilon_hat = std::max(EpsilonHatOneDirection(p_hi, q_lo, delta),
                                EpsilonHatOneDirection(q_hi, p_lo, delta));
  report.epsilon_hat_lower = std::max(EpsilonHatOneDirection(p_lo, q_hi, delta),
                                      EpsilonHatOneDirection(q_lo, p_hi, delta));
  report.delta = delta;
  report.method = AuditMethod::kMonteCarlo;
  report.samples_or_tolerance = static_cast<double>(trials);
  report.worst_pair = pair;
  report.worst_set = sets[WorstSetIndex(p_hi, q_lo)];
  return report;
}

std::vector<CountVector> AdjacentCorners(const CountVector& x,
                                         double sensitivity, int64_t limit) {
  if (x.empty()) {
    throw InvalidParameterError("count vector must be nonempty");
  }
  if (!(sensitivity > 0.0) || !std::isfinite(sensitivity)) {
    throw InvalidParameterError("sensitivity must be positive and finite");
  }
  const int m = static_cast<int>(x.size());
  std::vector<CountVector> corners;
  if (m <= 20 && (int64_t{1} << m) <= limit) {
    corners.reserve(size_t{1} << m);
    for (int64_t mask = 0; mask < (int64_t{1} << m); ++mask) {
      CountVector corner(x);
      for (int i = 0; i < m; ++i) {
        corner[i] += ((mask >> i) & 1) ? sensitivity : -sensitivity;
      }
      corners.push_back(std::move(corner));
    }
    return corners;
  }

  // Structured heuristic: push the lower half of the sorted values down and
  // the upper half up, and the reverse.
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&x](int a, int b) { return x[a] < x[b] || (x[a] == x[b] && a < b); });
  CountVector down_up(x), up_down(x);
  for (int r = 0; r < m; ++r) {
    const double shift = (r < (m + 1) / 2) ? -sensitivity : sensitivity;
    down_up[order[r]] += shift;
    up_down[order[r]] -= shift;
  }
  corners.push_back(std::move(down_up));
  corners.push_back(std::move(up_down));
  return corners;
}

}  // namespace oneshot
