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

#include "oneshot/ranking.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "oneshot/errors.h"
#include "oneshot/mechanisms.h"

namespace oneshot {
namespace {

void ValidateOmega(const std::vector<double>& omega) {
  if (omega.size() < 2) {
    throw InvalidParameterError("preference scores need at least two items");
  }
  for (double w : omega) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw InvalidParameterError("preference scores must be positive and finite");
    }
  }
}

std::vector<int> VertexDegrees(int m, const std::vector<Edge>& edges) {
  std::vector<int> degree(m, 0);
  for (const Edge& e : edges) {
    ++degree[e.i];
    ++degree[e.j];
  }
  return degree;
}

int MaxDegree(int m, const std::vector<Edge>& edges) {
  const std::vector<int> degree = VertexDegrees(m, edges);
  return degree.empty() ? 0 : *std::max_element(degree.begin(), degree.end());
}

bool IsConnected(int m, const std::vector<Edge>& edges) {
  if (m <= 1) return true;
  std::vector<int> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  const auto find = [&parent](int v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  };
  for (const Edge& e : edges) {
    parent[find(e.i)] = find(e.j);
  }
  const int root = find(0);
  for (int v = 1; v < m; ++v) {
    if (find(v) != root) return false;
  }
  return true;
}

void ValidateEdges(int m, const std::vector<Edge>& edges) {
  for (const Edge& e : edges) {
    if (e.i < 0 || e.j < 0 || e.i >= m || e.j >= m || e.i >= e.j) {
      throw InvalidParameterError("edges must be canonical pairs 0 <= i < j < m");
    }
  }
  for (size_t e = 1; e < edges.size(); ++e) {
    const bool ordered = edges[e - 1].i < edges[e].i ||
                         (edges[e - 1].i == edges[e].i && edges[e - 1].j < edges[e].j);
    if (!ordered) {
      throw InvalidParameterError("edges must be sorted and distinct");
    }
  }
}

}  // namespace

std::vector<Edge> CompleteGraphEdges(int m) {
  std::vector<Edge> edges;
  edges.reserve(static_cast<size_t>(m) * (m - 1) / 2);
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      edges.push_back(Edge{i, j});
    }
  }
  return edges;
}

ComparisonGraph SimulateComparisons(const std::vector<double>& omega,
                                    double edge_prob, int L, RngState& rng) {
  ValidateOmega(omega);
  if (L < 1) {
    throw InvalidParameterError("L must be at least 1");
  }
  if (!(edge_prob > 0.0) || edge_prob > 1.0) {
    throw InvalidParameterError("edge probability must lie in (0, 1]");
  }
  const int m = static_cast<int>(omega.size());

  ComparisonGraph graph;
  graph.m = m;
  graph.L = L;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      if (rng.NextUniform() < edge_prob) {
        graph.edges.push_back(Edge{i, j});
      }
    }
  }
  graph.samples.resize(graph.edges.size());
  for (size_t e = 0; e < graph.edges.size(); ++e) {
    const Edge& edge = graph.edges[e];
    const double win_prob = omega[edge.j] / (omega[edge.i] + omega[edge.j]);
    auto& draws = graph.samples[e];
    draws.resize(L);
    for (int l = 0; l < L; ++l) {
      draws[l] = rng.NextUniform() < win_prob ? 1 : 0;
    }
  }
  graph.d = MaxDegree(m, graph.edges) + 1.0;
  graph.connected = IsConnected(m, graph.edges);
  return graph;
}

SufficientStats ComputeStats(const ComparisonGraph& graph) {
  SufficientStats stats;
  stats.m = graph.m;
  stats.L = graph.L;
  stats.d = graph.d;
  stats.edges = graph.edges;
  stats.ybar.resize(graph.edges.size());
  for (size_t e = 0; e < graph.edges.size(); ++e) {
    int64_t wins = 0;
    for (uint8_t y : graph.samples[e]) wins += y;
    stats.ybar[e] = static_cast<double>(wins) / graph.L;
  }
  return stats;
}

SufficientStats ExactBtlStats(const std::vector<double>& omega,
                              const std::vector<Edge>& edges, int L, double d) {
  ValidateOmega(omega);
  const int m = static_cast<int>(omega.size());
  ValidateEdges(m, edges);
  if (L < 1) {
    throw InvalidParameterError("L must be at least 1");
  }
  SufficientStats stats;
  stats.m = m;
  stats.L = L;
  stats.d = d > 0.0 ? d : MaxDegree(m, edges) + 1.0;
  stats.edges = edges;
  stats.ybar.resize(edges.size());
  for (size_t e = 0; e < edges.size(); ++e) {
    stats.ybar[e] = omega[edges[e].j] / (omega[edges[e].i] + omega[edges[e].j]);
  }
  return stats;
}

TransitionMatrix BuildTransition(const SufficientStats& stats) {
  const int m = stats.m;
  if (m < 1) {
    throw InvalidParameterError("transition matrix needs m >= 1");
  }
  ValidateEdges(m, stats.edges);
  if (stats.d < MaxDegree(m, stats.edges)) {
    throw InvalidParameterError(
        "normalization d must be >= max vertex degree (negative diagonal)");
  }
  TransitionMatrix P;
  P.m = m;
  P.p.assign(static_cast<size_t>(m) * m, 0.0);
  for (size_t e = 0; e < stats.edges.size(); ++e) {
    const Edge& edge = stats.edges[e];
    const double y = stats.ybar[e];
    if (!(y >= 0.0) || !(y <= 1.0)) {
      throw InvalidParameterError("ybar entries must lie in [0, 1]");
    }
    P.at(edge.i, edge.j) = y / stats.d;
    P.at(edge.j, edge.i) = (1.0 - y) / stats.d;
  }
  // Diagonal as the exact complement: rows sum to 1 by construction. With
  // d equal to the max degree and all-win edges the true diagonal is 0 and
  // rounding can land a few ulp below it; clamp that dust, never a real
  // negative (those were rejected above).
  for (int i = 0; i < m; ++i) {
    double off = 0.0;
    for (int j = 0; j < m; ++j) {
      if (j != i) off += P.at(i, j);
    }
    double diag = 1.0 - off;
    if (diag < 0.0 && diag > -1e-9) diag = 0.0;
    P.at(i, i) = diag;
  }
  return P;
}

TransitionMatrix BuildTransition(const ComparisonGraph& graph) {
  return BuildTransition(ComputeStats(graph));
}

StationaryDistribution ComputeStationary(const TransitionMatrix& P, double tol,
                                         int64_t max_iter) {
  const int m = P.m;
  if (m < 1 || P.p.size() != static_cast<size_t>(m) * m) {
    throw InvalidParameterError("malformed transition matrix");
  }
  std::vector<double> v(m, 1.0 / m), w(m);
  double residual = 0.0;
  for (int64_t iter = 0; iter < max_iter; ++iter) {
    for (int j = 0; j < m; ++j) w[j] = 0.0;
    for (int i = 0; i < m; ++i) {
      const double vi = v[i];
      const double* row = &P.p[static_cast<size_t>(i) * m];
      for (int j = 0; j < m; ++j) w[j] += vi * row[j];
    }
    double mass = 0.0;
    for (double x : w) mass += x;
    for (double& x : w) x /= mass;
    residual = 0.0;
    for (int j = 0; j < m; ++j) residual += std::fabs(w[j] - v[j]);
    if (residual <= tol) {
      return StationaryDistribution{std::move(v), iter + 1, residual};
    }
    std::swap(v, w);
  }
  std::ostringstream msg;
  msg << "power iteration did not reach tol " << tol << " in " << max_iter
      << " iterations (residual " << residual
      << "); the chain may be reducible or periodic";
  throw ConvergenceError(msg.str());
}

double ErgodicityCoefficient(const TransitionMatrix& P) {
  const int m = P.m;
  if (m < 1 || P.p.size() != static_cast<size_t>(m) * m) {
    throw InvalidParameterError("malformed transition matrix");
  }
  double worst = 0.0;
  for (int a = 0; a < m; ++a) {
    for (int b = a + 1; b < m; ++b) {
      double dist = 0.0;
      for (int j = 0; j < m; ++j) {
        dist += std::fabs(P.at(a, j) - P.at(b, j));
      }
      worst = std::max(worst, dist);
    }
  }
  return std::min(0.5 * worst, 1.0);
}

double StationarySensitivity(double d, int L, double rho) {
  if (!(d > 0.0) || !std::isfinite(d)) {
    throw InvalidParameterError("d must be positive and finite");
  }
  if (L < 1) {
    throw InvalidParameterError("L must be at least 1");
  }
  if (!(rho >= 0.0) || rho >= 1.0) {
    throw InvalidParameterError("rho must lie in [0, 1)");
  }
  return 2.0 / (d * L * (1.0 - rho));
}

ErgodicityReport CheckRhoConstraint(const TransitionMatrix& P, double rho,
                                    double d, int L) {
  ErgodicityReport report;
  report.tau1 = ErgodicityCoefficient(P);
  report.rho = rho;
  report.constrained = rho < 1.0 && report.tau1 <= rho;
  report.sensitivity = report.constrained ? StationarySensitivity(d, L, rho) : 0.0;
  return report;
}

double PerturbationNorm(const ComparisonGraph& graph, int edge_index,
                        int sample_index, uint8_t new_value) {
  if (edge_index < 0 || static_cast<size_t>(edge_index) >= graph.edges.size()) {
    throw InvalidParameterError("edge index out of range");
  }
  if (sample_index < 0 || sample_index >= graph.L) {
    throw InvalidParameterError("sample index out of range");
  }
  if (new_value > 1) {
    throw InvalidParameterError("outcome must be 0 or 1");
  }
  const TransitionMatrix P = BuildTransition(graph);
  ComparisonGraph flipped = graph;
  flipped.samples[edge_index][sample_index] = new_value;
  const TransitionMatrix Pt = BuildTransition(flipped);

  double norm = 0.0;
  for (int i = 0; i < P.m; ++i) {
    double row = 0.0;
    for (int j = 0; j < P.m; ++j) {
      row += std::fabs(P.at(i, j) - Pt.at(i, j));
    }
    norm = std::max(norm, row);
  }
  return norm;
}

RankPipelineResult RunPrivateRankPipeline(const SufficientStats& stats, int k,
                                          double epsilon, double delta,
                                          double rho, RngState& rng) {
  ValidatePrivacyParams(PrivacyParams{epsilon, delta, k, stats.m, 1.0});
  if (!(rho >= 0.0) || rho >= 1.0) {
    throw InvalidParameterError("rho must lie in [0, 1)");
  }
  if (!IsConnected(stats.m, stats.edges)) {
    throw ConstraintError(
        "comparison graph is disconnected: the stationary distribution is not "
        "unique, so the privacy guarantee is void");
  }
  const TransitionMatrix P = BuildTransition(stats);
  const ErgodicityReport ergodicity = CheckRhoConstraint(P, rho, stats.d, stats.L);
  if (!ergodicity.constrained) {
    std::ostringstream msg;
    msg << "rho-constraint violated: tau1(P) = " << ergodicity.tau1 << " > rho = "
        << rho << "; refusing to run without a valid sensitivity bound";
    throw ConstraintError(msg.str());
  }
  StationaryDistribution stationary = ComputeStationary(P);

  RankPipelineResult result;
  result.tau1 = ergodicity.tau1;
  result.sensitivity = ergodicity.sensitivity;
  const NoiseScale lambda = CalibrateApprox(k, stats.m, delta, epsilon,
                                            ergodicity.sensitivity);
  result.lambda = lambda.value();
  result.selection = OneshotSelectMax(stationary.pi, k, lambda, rng).indices;
  result.iterations = stationary.iterations;
  result.residual = stationary.residual;
  result.pi = std::move(stationary.pi);
  return result;
}

RankPipelineResult RunPrivateRankPipeline(const ComparisonGraph& graph, int k,
                                          double epsilon, double delta,
                                          double rho, RngState& rng) {
  if (!graph.connected) {
    throw ConstraintError(
        "comparison graph is disconnected: the stationary distribution is not "
        "unique, so the privacy guarantee is void");
  }
  return RunPrivateRankPipeline(ComputeStats(graph), k, epsilon, delta, rho, rng);
}

std::vector<int> PrivateTopKRank(const ComparisonGraph& graph, int k,
                                 double epsilon, double delta, double rho,
                                 RngState& rng) {
  return RunPrivateRankPipeline(graph, k, epsilon, delta, rho, rng).selection;
}

void WriteComparisonFile(const ComparisonGraph& graph, std::ostream& out) {
  char header[64];
  std::snprintf(header, sizeof(header), "m=%d L=%d d=%.17g", graph.m, graph.L,
                graph.d);
  out << header << "\n";
  for (size_t e = 0; e < graph.edges.size(); ++e) {
    const Edge& edge = graph.edges[e];
    for (int l = 0; l < graph.L; ++l) {
      out << (edge.i + 1) << ' ' << (edge.j + 1) << ' ' << (l + 1) << ' '
          << static_cast<int>(graph.samples[e][l]) << "\n";
    }
  }
}

ComparisonGraph ReadComparisonFile(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw InvalidParameterError("comparison file is empty");
  }
  ComparisonGraph graph;
  {
    int m = 0, L = 0;
    double d = 0.0;
    if (std::sscanf(line.c_str(), "m=%d L=%d d=%lf", &m, &L, &d) != 3 ||
        m < 2 || L < 1 || !(d > 0.0)) {
      throw InvalidParameterError("malformed header, expected m=<int> L=<int> d=<float>");
    }
    graph.m = m;
    graph.L = L;
    graph.d = d;
  }

  // Collect records keyed by canonical edge; reversed records are stored as
  // the complementary outcome (y_{j,i} = 1 - y_{i,j}).
  struct EdgeSamples {
    std::vector<int8_t> values;  // -1 = unseen
  };
  std::vector<std::pair<int64_t, EdgeSamples>> edge_data;  // key i*m + j
  const auto find_edge = [&](int64_t key) -> EdgeSamples& {
    for (auto& [k, data] : edge_data) {
      if (k == key) return data;
    }
    edge_data.emplace_back(key, EdgeSamples{std::vector<int8_t>(graph.L, -1)});
    return edge_data.back().second;
  };

  int64_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    int i = 0, j = 0, l = 0, outcome = -1;
    if (std::sscanf(line.c_str(), "%d %d %d %d", &i, &j, &l, &outcome) != 4) {
      throw InvalidParameterError("malformed record at line " +
                                  std::to_string(line_number));
    }
    if (i < 1 || j < 1 || i > graph.m || j > graph.m || i == j) {
      throw InvalidParameterError("vertex index out of range at line " +
                                  std::to_string(line_number));
    }
    if (l < 1 || l > graph.L) {
      throw InvalidParameterError("sample index out of range at line " +
                                  std::to_string(line_number));
    }
    if (outcome != 0 && outcome != 1) {
      throw InvalidParameterError("outcome must be 0 or 1 at line " +
                                  std::to_string(line_number));
    }
    int a = i - 1, b = j - 1;
    int y = outcome;
    if (a > b) {
      std::swap(a, b);
      y = 1 - y;
    }
    EdgeSamples& data = find_edge(static_cast<int64_t>(a) * graph.m + b);
    if (data.values[l - 1] != -1) {
      throw InvalidParameterError("duplicate sample (" + std::to_string(i) + "," +
                                  std::to_string(j) + "," + std::to_string(l) + ")");
    }
    data.values[l - 1] = static_cast<int8_t>(y);
  }

  std::sort(edge_data.begin(), edge_data.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [key, data] : edge_data) {
    const int i = static_cast<int>(key / graph.m);
    const int j = static_cast<int>(key % graph.m);
    std::vector<uint8_t> samples(graph.L);
    for (int l = 0; l < graph.L; ++l) {
      if (data.values[l] == -1) {
        throw InvalidParameterError("edge (" + std::to_string(i + 1) + "," +
                                    std::to_string(j + 1) + ") is missing sample " +
                                    std::to_string(l + 1));
      }
      samples[l] = static_cast<uint8_t>(data.values[l]);
    }
    graph.edges.push_back(Edge{i, j});
    graph.samples.push_back(std::move(samples));
  }
  if (graph.d < MaxDegree(graph.m, graph.edges)) {
    throw InvalidParameterError("header d is below the max vertex degree");
  }
  graph.connected = IsConnected(graph.m, graph.edges);
  return graph;
}

void WriteComparisonFile(const ComparisonGraph& graph, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw InvalidParameterError("cannot open " + path + " for writing");
  }
  WriteComparisonFile(graph, out);
}

ComparisonGraph ReadComparisonFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InvalidParameterError("cannot open " + path);
  }
  return ReadComparisonFile(in);
}

}  // namespace oneshot
