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

#ifndef ONESHOT_RANKING_H_
#define ONESHOT_RANKING_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "oneshot/rng.h"

namespace oneshot {

// Unordered comparison-graph edge, stored canonically with i < j (0-based).
struct Edge {
  int i = 0;
  int j = 0;
};

inline bool operator==(const Edge& a, const Edge& b) {
  return a.i == b.i && a.j == b.j;
}

// Pairwise-comparison data under the Bradley-Terry-Luce model. For the
// canonical edge (i, j), samples[e][l] is the l-th binary outcome y_{i,j}:
// 1 means j preferred over i; the reverse direction is implied by
// y_{j,i} = 1 - y_{i,j}.
struct ComparisonGraph {
  int m = 0;
  int L = 0;
  double d = 1.0;  // row normalization, must be >= max vertex degree
  std::vector<Edge> edges;                   // sorted lexicographically
  std::vector<std::vector<uint8_t>> samples;  // samples[e].size() == L
  bool connected = false;
};

// Per-edge mean outcomes, enough to build the transition matrix.
struct SufficientStats {
  int m = 0;
  int L = 0;
  double d = 1.0;
  std::vector<Edge> edges;
  std::vector<double> ybar;  // mean of y_{i,j} for the canonical direction
};

// Row-stochastic dense matrix of the comparison random walk.
struct TransitionMatrix {
  int m = 0;
  std::vector<double> p;  // row-major, m*m

  double at(int i, int j) const { return p[static_cast<size_t>(i) * m + j]; }
  double& at(int i, int j) { return p[static_cast<size_t>(i) * m + j]; }
};

struct StationaryDistribution {
  std::vector<double> pi;
  int64_t iterations = 0;
  double residual = 0.0;  // ||pi^T P - pi^T||_1 at return
};

// Outcome of checking tau_1(P) <= rho < 1 for the privacy pipeline.
struct ErgodicityReport {
  double tau1 = 0.0;
  double rho = 0.0;
  bool constrained = false;
  double sensitivity = 0.0;  // 2 / (d L (1 - rho)) when constrained
};

// Draws an Erdos-Renyi comparison graph (each unordered pair independently
// with edge_prob) and L Bernoulli outcomes per edge with
// P(y_{i,j} = 1) = omega[j] / (omega[i] + omega[j]). Sets d to
// (max vertex degree) + 1 so the walk's diagonal stays strictly positive.
// A disconnected result is flagged, not an error. Rng order: one uniform per
// vertex pair in lexicographic order, then L uniforms per realized edge.
ComparisonGraph SimulateComparisons(const std::vector<double>& omega,
                                    double edge_prob, int L, RngState& rng);

SufficientStats ComputeStats(const ComparisonGraph& graph);

// Stats with the exact model probabilities omega[j] / (omega[i] + omega[j])
// plugged in as ybar (the infinite-L limit); nominal L is kept for
// sensitivity accounting. d = 0 means the (max degree) + 1 default.
SufficientStats ExactBtlStats(const std::vector<double>& omega,
                              const std::vector<Edge>& edges, int L,
                              double d = 0.0);

// All unordered pairs of {0, ..., m-1}.
std::vector<Edge> CompleteGraphEdges(int m);

// P[i][j] = ybar_{i,j} / d on edges, diagonal the exact row complement,
// zero elsewhere. Throws InvalidParameterError if d < max vertex degree
// (negative diagonal).
TransitionMatrix BuildTransition(const SufficientStats& stats);
TransitionMatrix BuildTransition(const ComparisonGraph& graph);

// Power iteration from the uniform vector until ||pi^T P - pi^T||_1 <= tol.
// Throws ConvergenceError (reporting the residual) when max_iter is hit,
// which is also how reducible or periodic chains surface.
StationaryDistribution ComputeStationary(const TransitionMatrix& P,
                                         double tol = 1e-12,
                                         int64_t max_iter = 1000000);

// Ergodicity coefficient via the pairwise-row characterization
// tau_1(P) = (1/2) max_{i,j} sum_k |P_ik - P_jk|, in [0, 1] for
// row-stochastic P.
double ErgodicityCoefficient(const TransitionMatrix& P);

// End-to-end sensitivity of the stationary distribution to one flipped
// comparison sample on a rho-constrained graph: 2 / (d L (1 - rho)).
double StationarySensitivity(double d, int L, double rho);

ErgodicityReport CheckRhoConstraint(const TransitionMatrix& P, double rho,
                                    double d, int L);

// Sets sample (edge_index, sample_index) to new_value and returns
// ||P - P_tilde||_inf (max absolute row sum of the difference). A flip that
// changes the value yields exactly 2 / (d L); a no-op flip yields 0.
double PerturbationNorm(const ComparisonGraph& graph, int edge_index,
                        int sample_index, uint8_t new_value);

struct RankPipelineResult {
  std::vector<double> pi;
  double tau1 = 0.0;
  double sensitivity = 0.0;
  double lambda = 0.0;
  std::vector<int> selection;  // ascending index set, 0-based
  int64_t iterations = 0;
  double residual = 0.0;
};

// Full private ranking pipeline: transition matrix, stationary distribution,
// rho-constraint check, sensitivity 2/(d L (1 - rho)), noise scale
// 8 s sqrt(k log(m/delta)) / epsilon, then oneshot max-selection on pi.
// Throws ConstraintError when the graph is disconnected or tau_1(P) > rho:
// the privacy guarantee would be void, so it refuses to run.
RankPipelineResult RunPrivateRankPipeline(const ComparisonGraph& graph, int k,
                                          double epsilon, double delta,
                                          double rho, RngState& rng);
RankPipelineResult RunPrivateRankPipeline(const SufficientStats& stats, int k,
                                          double epsilon, double delta,
                                          double rho, RngState& rng);

// The released output of the pipeline: the index set only.
std::vector<int> PrivateTopKRank(const ComparisonGraph& graph, int k,
                                 double epsilon, double delta, double rho,
                                 RngState& rng);

// Line-oriented comparison-data format. Header `m=<int> L=<int> d=<float>`,
// then one record per line: `i j l outcome` with 1-based i, j, l in [1, L]
// and outcome in {0, 1}. Writing is canonical (edges sorted, i < j, l
// ascending), so write-read-write round-trips are byte identical.
void WriteComparisonFile(const ComparisonGraph& graph, std::ostream& out);
ComparisonGraph ReadComparisonFile(std::istream& in);
void WriteComparisonFile(const ComparisonGraph& graph, const std::string& path);
ComparisonGraph ReadComparisonFile(const std::string& path);

}  // namespace oneshot

#endif  // ONESHOT_RANKING_H_
