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
// Experiment runner for the oneshot top-k library. Subcommands: calibrate,
// topk, audit, utility, rank. Every run is deterministic given --seed, and
// every emitted number is traceable to its configuration through the
// provenance block (config hash, seed, build id).
//
// Exit codes: 0 success / audit pass, 1 assertion or audit failure,
// 2 invalid input.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "oneshot/analysis.h"
#include "oneshot/audit.h"
#include "oneshot/errors.h"
#include "oneshot/mechanisms.h"
#include "oneshot/noise.h"
#include "oneshot/ranking.h"
#include "oneshot/rng.h"

#ifndef ONESHOT_BUILD_ID
#define ONESHOT_BUILD_ID "unknown"
#endif

namespace {

using nlohmann::json;
using oneshot::AdjacentPair;
using oneshot::AuditReport;
using oneshot::ComparisonGraph;
using oneshot::CountVector;
using oneshot::NoiseScale;
using oneshot::RngState;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInvalid = 2;

std::string FormatDouble(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

uint64_t Fnv1aHash(const std::string& text) {
  uint64_t hash = 0xCBF29CE484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001B3ULL;
  }
  return hash;
}

// Provenance block: every emitted number is traceable to this config.
json Provenance(const json& config) {
  char hash[19];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(Fnv1aHash(config.dump())));
  return json{{"config", config},
              {"config_hash", hash},
              {"build", ONESHOT_BUILD_ID}};
}

void EmitText(const std::string& text, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output_path, std::ios::binary);
  if (!out) {
    throw oneshot::InvalidParameterError("cannot open output file " +
                                         output_path);
  }
  out << text;
}

void EmitRecord(const json& record, const std::string& output_path) {
  EmitText(record.dump(2) + "\n", output_path);
}

void EmitCsv(const std::vector<std::string>& header,
             const std::vector<std::vector<std::string>>& rows,
             const std::string& output_path) {
  std::ostringstream text;
  for (size_t c = 0; c < header.size(); ++c) {
    text << header[c] << (c + 1 < header.size() ? "," : "\n");
  }
  for (const auto& row : rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      text << row[c] << (c + 1 < row.size() ? "," : "\n");
    }
  }
  EmitText(text.str(), output_path);
}

CountVector ReadCountsFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw oneshot::InvalidParameterError("cannot open counts file " + path);
  }
  CountVector counts;
  std::string line;
  while (std::getline(in, line)) {
    const size_t comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    std::istringstream fields(line);
    double value;
    if (fields >> value) {
      counts.push_back(value);
    }
  }
  if (counts.empty()) {
    throw oneshot::InvalidParameterError("counts file " + path +
                                         " holds no values");
  }
  return counts;
}

std::vector<double> ParseDoubleList(const std::string& text) {
  std::vector<double> values;
  std::string token;
  std::istringstream stream(text);
  while (std::getline(stream, token, ',')) {
    try {
      size_t used = 0;
      values.push_back(std::stod(token, &used));
    } catch (const std::exception&) {
      throw oneshot::InvalidParameterError("cannot parse number '" + token + "'");
    }
  }
  if (values.empty()) {
    throw oneshot::InvalidParameterError("empty number list");
  }
  return values;
}

json ToOneBased(const std::vector<int>& indices) {
  json shifted = json::array();
  for (int idx : indices) shifted.push_back(idx + 1);
  return shifted;
}

// --config overlay: JSON values fill any option the user did not pass on the
// command line, so archived config files reproduce runs while flags override.
void ApplyConfigFile(CLI::App* cmd, const std::string& config_path) {
  if (config_path.empty()) return;
  std::ifstream in(config_path);
  if (!in) {
    throw oneshot::InvalidParameterError("cannot open config file " +
                                         config_path);
  }
  json config;
  try {
    in >> config;
  } catch (const json::exception& e) {
    throw oneshot::InvalidParameterError("config file " + config_path + ": " +
                                         e.what());
  }
  for (const auto& [key, value] : config.items()) {
    CLI::Option* option = cmd->get_option_no_throw("--" + key);
    if (option == nullptr || option->count() > 0) continue;
    const std::string text =
        value.is_string() ? value.get<std::string>() : value.dump();
    option->clear();
    option->add_result(text);
    option->run_callback();
  }
}

// Deterministic trial parallelism: trial t always writes into slot t with its
// own substream, so aggregates are independent of the thread layout.
template <typename PerTrial>
void RunTrials(int64_t trials, int jobs, const PerTrial& per_trial) {
  const int workers = std::max(1, jobs);
  if (workers == 1) {
    for (int64_t t = 0; t < trials; ++t) per_trial(t);
    return;
  }
  std::vector<std::thread> threads;
  const int64_t chunk = (trials + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const int64_t begin = w * chunk;
    const int64_t end = std::min<int64_t>(trials, begin + chunk);
    if (begin >= end) break;
    threads.emplace_back([begin, end, &per_trial] {
      for (int64_t t = begin; t < end; ++t) per_trial(t);
    });
  }
  for (auto& t : threads) t.join();
}

struct CommonOptions {
  uint64_t seed = 0;
  std::string format = "json";
  int jobs = 1;
  std::string config_path;
  std::string output_path;
};

void AddCommonOptions(CLI::App* cmd, CommonOptions* common) {
  cmd->add_option("--seed", common->seed, "Root RNG seed");
  cmd->add_option("--format", common->format, "Output format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--jobs", common->jobs, "Worker threads for trials")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--config", common->config_path,
                  "JSON config file; explicit flags override its values");
  cmd->add_option("--output", common->output_path,
                  "Write the result here instead of stdout");
}

double ResolveLambda(double lambda_override, const std::string& calibration,
                     int k, int m, double delta, double epsilon,
                     double sensitivity) {
  if (lambda_override > 0.0) return lambda_override;
  if (calibration == "pure") {
    return oneshot::CalibratePure(k, sensitivity, epsilon).value();
  }
  return oneshot::CalibrateApprox(k, m, delta, epsilon, sensitivity).value();
}

// ---------------------------------------------------------------------------
// calibrate
// ---------------------------------------------------------------------------

struct CalibrateOptions {
  CommonOptions common;
  int k = 1;
  int m = 2;
  double epsilon = 0.2;
  double delta = 0.05;
  double sensitivity = 1.0;
};

int RunCalibrate(const CalibrateOptions& opt) {
  const oneshot::PrivacyParams params{opt.epsilon, opt.delta, opt.k, opt.m,
                                      opt.sensitivity};
  oneshot::ValidatePrivacyParams(params);
  const double pure =
      oneshot::CalibratePure(opt.k, opt.sensitivity, opt.epsilon).value();
  const double approx = oneshot::CalibrateApprox(params).value();
  const double regime_threshold = oneshot::kC0 * std::log(opt.m / opt.delta);
  const bool regime_large_k = static_cast<double>(opt.k) >= regime_threshold;

  const json config{{"k", opt.k},
                    {"m", opt.m},
                    {"eps", opt.epsilon},
                    {"delta", opt.delta},
                    {"sensitivity", opt.sensitivity},
                    {"seed", opt.common.seed}};
  if (opt.common.format == "csv") {
    EmitCsv({"pure_lambda", "approx_lambda", "regime_large_k", "regime_threshold"},
            {{FormatDouble(pure), FormatDouble(approx), regime_large_k ? "1" : "0",
              FormatDouble(regime_threshold)}},
            opt.common.output_path);
  } else {
    EmitRecord(json{{"pure_lambda", pure},
                    {"approx_lambda", approx},
                    {"regime_large_k", regime_large_k},
                    {"regime_threshold", regime_threshold},
                    {"provenance", Provenance(config)}},
               opt.common.output_path);
  }
  return kExitPass;
}

// ---------------------------------------------------------------------------
// topk
// ---------------------------------------------------------------------------

struct TopkOptions {
  CommonOptions common;
  std::string counts_path;
  int k = 1;
  std::string mechanism = "oneshot";
  double lambda = 0.0;  // 0 means calibrate from the privacy parameters
  std::string calibration = "approx";
  double epsilon = 0.2;
  double delta = 0.05;
  double sensitivity = 1.0;
};

int RunTopk(const TopkOptions& opt) {
  const CountVector counts = ReadCountsFile(opt.counts_path);
  const int m = static_cast<int>(counts.size());
  const double lambda = ResolveLambda(opt.lambda, opt.calibration, opt.k, m,
                                      opt.delta, opt.epsilon, opt.sensitivity);
  const NoiseScale scale(lambda);
  RngState rng(opt.common.seed);

  std::vector<int> indices;
  std::vector<double> estimates;
  bool ordered = false;
  if (opt.mechanism == "oneshot") {
    oneshot::TopKSelection selection =
        oneshot::OneshotSelectMin(counts, opt.k, scale, rng);
    indices = std::move(selection.indices);
    estimates = std::move(selection.estimates);
  } else if (opt.mechanism == "peeling") {
    ordered = true;
    for (const auto& round : oneshot::PeelingSelect(counts, opt.k, scale, rng)) {
      indices.push_back(round.index);
      estimates.push_back(round.estimate);
    }
  } else {
    ordered = true;
    indices = oneshot::GumbelOneshotSelect(counts, opt.k, lambda, rng);
  }

  const json config{{"counts", opt.counts_path},
                    {"k", opt.k},
                    {"mechanism", opt.mechanism},
                    {"lambda", lambda},
                    {"seed", opt.common.seed}};
  if (opt.common.format == "csv") {
    std::vector<std::vector<std::string>> rows;
    for (size_t i = 0; i < indices.size(); ++i) {
      rows.push_back({std::to_string(indices[i] + 1),
                      i < estimates.size() ? FormatDouble(estimates[i]) : ""});
    }
    EmitCsv({"index", "estimate"}, rows, opt.common.output_path);
  } else {
    json record{{"mechanism", opt.mechanism},
                {"lambda", lambda},
                {"m", m},
                {"ordered", ordered},
                {"indices", ToOneBased(indices)},
                {"provenance", Provenance(config)}};
    if (!estimates.empty()) record["estimates"] = estimates;
    EmitRecord(record, opt.common.output_path);
  }
  return kExitPass;
}

// ---------------------------------------------------------------------------
// audit
// ---------------------------------------------------------------------------

struct AuditOptions {
  CommonOptions common;
  std::string counts_path;
  int k = 1;
  double epsilon = 0.2;  // target
  double delta = 0.0;
  double sensitivity = 1.0;
  double lambda = 0.0;
  std::string calibration = "pure";
  std::string method = "exact";
  int64_t trials = 100000;
  int64_t corner_limit = 4096;
};

int RunAudit(const AuditOptions& opt) {
  const CountVector counts = ReadCountsFile(opt.counts_path);
  const int m = static_cast<int>(counts.size());
  const double lambda =
      ResolveLambda(opt.lambda, opt.calibration, opt.k, m,
                    opt.delta > 0.0 ? opt.delta : 0.05, opt.epsilon,
                    opt.sensitivity);
  const NoiseScale scale(lambda);
  const std::vector<CountVector> corners =
      oneshot::AdjacentCorners(counts, opt.sensitivity, opt.corner_limit);

  AuditReport worst;
  int worst_corner = -1;
  std::vector<std::vector<std::string>> rows;
  RngState rng(opt.common.seed);
  if (opt.method == "exact") {
    const auto sets = oneshot::EnumerateKSubsets(m, opt.k);
    // The base table is shared across corners.
    const std::vector<double> p =
        oneshot::OutcomeDistribution(counts, sets, scale);
    std::vector<double> worst_q;
    for (size_t c = 0; c < corners.size(); ++c) {
      const std::vector<double> q =
          oneshot::OutcomeDistribution(corners[c], sets, scale);
      const double eps_hat = oneshot::EpsilonHatFromTables(p, q, opt.delta);
      rows.push_back({std::to_string(c), FormatDouble(eps_hat)});
      if (worst_corner < 0 || eps_hat > worst.epsilon_hat) {
        worst.epsilon_hat = eps_hat;
        worst.epsilon_hat_lower = eps_hat;
        worst.delta = opt.delta;
        worst.method = oneshot::AuditMethod::kExactQuadrature;
        worst.samples_or_tolerance = 1e-4;
        worst.worst_pair = AdjacentPair{counts, corners[c], opt.sensitivity};
        worst_corner = static_cast<int>(c);
        worst_q = q;
      }
    }
    size_t best_set = 0;
    double best_ratio = 0.0;
    for (size_t s = 0; s < sets.size(); ++s) {
      const double ratio = std::max(p[s] / std::max(worst_q[s], 1e-300),
                                    worst_q[s] / std::max(p[s], 1e-300));
      if (ratio > best_ratio) {
        best_ratio = ratio;
        best_set = s;
      }
    }
    worst.worst_set = sets[best_set];
  } else {
    for (size_t c = 0; c < corners.size(); ++c) {
      RngState corner_rng = rng.Substream(c);
      const AuditReport report = oneshot::EpsilonHatMonteCarlo(
          AdjacentPair{counts, corners[c], opt.sensitivity}, opt.k, scale,
          opt.delta, opt.trials, corner_rng, opt.common.jobs);
      rows.push_back({std::to_string(c), FormatDouble(report.epsilon_hat)});
      if (worst_corner < 0 || report.epsilon_hat > worst.epsilon_hat) {
        worst = report;
        worst_corner = static_cast<int>(c);
      }
    }
  }

  worst.target_epsilon = opt.epsilon;
  worst.slack = worst.epsilon_hat / opt.epsilon;
  const bool pass = worst.epsilon_hat <= opt.epsilon;

  const json config{{"counts", opt.counts_path},
                    {"k", opt.k},
                    {"eps", opt.epsilon},
                    {"delta", opt.delta},
                    {"lambda", lambda},
                    {"method", opt.method},
                    {"sensitivity", opt.sensitivity},
                    {"trials", opt.trials},
                    {"seed", opt.common.seed}};
  if (opt.common.format == "csv") {
    EmitCsv({"corner", "epsilon_hat"}, rows, opt.common.output_path);
  } else {
    EmitRecord(json{{"epsilon_hat", worst.epsilon_hat},
                    {"epsilon_hat_lower", worst.epsilon_hat_lower},
                    {"target_epsilon", opt.epsilon},
                    {"slack", worst.slack},
                    {"delta", opt.delta},
                    {"lambda", lambda},
                    {"method", opt.method},
                    {"pass", pass},
                    {"corners", corners.size()},
                    {"worst_corner", worst_corner},
                    {"worst_corner_x2", worst.worst_pair.x2},
                    {"worst_set", ToOneBased(worst.worst_set)},
                    {"samples_or_tolerance", worst.samples_or_tolerance},
                    {"provenance", Provenance(config)}},
               opt.common.output_path);
  }
  return pass ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------
// utility
// ---------------------------------------------------------------------------

struct UtilityOptions {
  CommonOptions common;
  int m = 10;
  int k = 0;  // 0 means (m + 1) / 2
  double lambda = 1.0;
  std::string gaps = "1";
  int64_t trials = 10000;
};

int RunUtility(const UtilityOptions& opt) {
  if (opt.m < 2) {
    throw oneshot::InvalidParameterError("utility requires m >= 2");
  }
  const int k = opt.k > 0 ? opt.k : (opt.m + 1) / 2;
  if (k > opt.m) {
    throw oneshot::InvalidParameterError("k must not exceed m");
  }
  if (opt.trials < 1) {
    throw oneshot::InvalidParameterError("trials must be positive");
  }
  const NoiseScale scale(opt.lambda);
  const std::vector<double> gaps = ParseDoubleList(opt.gaps);
  RngState rng(opt.common.seed);

  json gap_records = json::array();
  std::vector<std::vector<std::string>> rows;
  for (size_t g = 0; g < gaps.size(); ++g) {
    const double gap = gaps[g];
    CountVector x(opt.m);
    for (int i = 0; i < opt.m; ++i) x[i] = i * gap;
    std::vector<int> truth(k);
    for (int i = 0; i < k; ++i) truth[i] = i;

    const double p_bound = oneshot::UtilityBound(opt.m, scale, gap);
    std::vector<uint8_t> hit(opt.trials, 0);
    std::vector<double> abs_err(opt.trials, 0.0);
    RngState gap_rng = rng.Substream(g);
    RunTrials(opt.trials, opt.common.jobs, [&](int64_t t) {
      RngState trial_rng = gap_rng.Substream(t);
      const oneshot::TopKSelection selection =
          oneshot::OneshotSelectMin(x, k, scale, trial_rng);
      hit[t] = selection.indices == truth ? 1 : 0;
      double err = 0.0;
      for (size_t i = 0; i < selection.indices.size(); ++i) {
        err += std::fabs(selection.estimates[i] - x[selection.indices[i]]);
      }
      abs_err[t] = err / static_cast<double>(selection.indices.size());
    });
    int64_t hits = 0;
    double err_sum = 0.0;
    for (int64_t t = 0; t < opt.trials; ++t) {
      hits += hit[t];
      err_sum += abs_err[t];
    }
    const double freq = static_cast<double>(hits) / opt.trials;
    const double freq_se =
        std::sqrt(std::max(freq * (1.0 - freq), 1e-12) / opt.trials);
    const double mae = err_sum / opt.trials;
    gap_records.push_back(json{
        {"gap", gap},
        {"p_bound", p_bound},
        {"recovery_frequency", freq},
        {"freq_ci99_low", std::max(0.0, freq - 2.576 * freq_se)},
        {"freq_ci99_high", std::min(1.0, freq + 2.576 * freq_se)},
        {"estimate_mae", mae}});
    rows.push_back({FormatDouble(gap), FormatDouble(p_bound), FormatDouble(freq),
                    FormatDouble(mae)});
  }

  const json config{{"m", opt.m},           {"k", k},
                    {"lambda", opt.lambda}, {"gaps", opt.gaps},
                    {"trials", opt.trials}, {"seed", opt.common.seed}};
  if (opt.common.format == "csv") {
    EmitCsv({"gap", "p_bound", "recovery_frequency", "estimate_mae"}, rows,
            opt.common.output_path);
  } else {
    EmitRecord(json{{"m", opt.m},
                    {"k", k},
                    {"lambda", opt.lambda},
                    {"trials", opt.trials},
                    {"gaps", gap_records},
                    {"provenance", Provenance(config)}},
               opt.common.output_path);
  }
  return kExitPass;
}

// ---------------------------------------------------------------------------
// rank
// ---------------------------------------------------------------------------

struct RankOptions {
  CommonOptions common;
  std::string input_path;
  std::string omega;
  double edge_prob = 1.0;
  int L = 100;
  bool exact_stats = false;
  double d = 0.0;
  int k = 1;
  double epsilon = 0.2;
  double delta = 0.05;
  double rho = 0.9;
};

int RunRank(const RankOptions& opt) {
  RngState rng(opt.common.seed);

  oneshot::SufficientStats stats;
  bool simulated = false;
  if (!opt.input_path.empty()) {
    const ComparisonGraph graph = oneshot::ReadComparisonFile(opt.input_path);
    if (!graph.connected) {
      throw oneshot::InvalidParameterError(
          "comparison graph is disconnected: no unique stationary distribution");
    }
    stats = oneshot::ComputeStats(graph);
  } else if (!opt.omega.empty()) {
    const std::vector<double> omega = ParseDoubleList(opt.omega);
    simulated = true;
    if (opt.exact_stats) {
      stats = oneshot::ExactBtlStats(
          omega, oneshot::CompleteGraphEdges(static_cast<int>(omega.size())),
          opt.L, opt.d);
    } else {
      ComparisonGraph graph =
          oneshot::SimulateComparisons(omega, opt.edge_prob, opt.L, rng);
      if (opt.d > 0.0) graph.d = opt.d;
      if (!graph.connected) {
        throw oneshot::InvalidParameterError(
            "simulated comparison graph is disconnected: no unique stationary "
            "distribution (raise --edge-prob)");
      }
      stats = oneshot::ComputeStats(graph);
    }
  } else {
    throw oneshot::InvalidParameterError("rank needs --input or --omega");
  }

  const json config{{"input", opt.input_path},
                    {"omega", opt.omega},
                    {"edge_prob", opt.edge_prob},
                    {"L", opt.L},
                    {"exact_stats", opt.exact_stats},
                    {"d", stats.d},
                    {"k", opt.k},
                    {"eps", opt.epsilon},
                    {"delta", opt.delta},
                    {"rho", opt.rho},
                    {"seed", opt.common.seed}};
  json record{{"m", stats.m},           {"L", stats.L},
              {"d", stats.d},           {"rho", opt.rho},
              {"simulated", simulated}, {"provenance", Provenance(config)}};
  try {
    const oneshot::RankPipelineResult result = oneshot::RunPrivateRankPipeline(
        stats, opt.k, opt.epsilon, opt.delta, opt.rho, rng);
    record["tau1"] = result.tau1;
    record["constrained"] = true;
    record["sensitivity"] = result.sensitivity;
    record["lambda"] = result.lambda;
    record["pi"] = result.pi;
    record["pi_min_gap"] = oneshot::MinGap(result.pi);
    record["selection"] = ToOneBased(result.selection);
    record["iterations"] = result.iterations;
    record["residual"] = result.residual;
    EmitRecord(record, opt.common.output_path);
    return kExitPass;
  } catch (const oneshot::ConstraintError& e) {
    // Report tau1 with the refusal so the caller can see how far off it was.
    const oneshot::TransitionMatrix P = oneshot::BuildTransition(stats);
    record["tau1"] = oneshot::ErgodicityCoefficient(P);
    record["constrained"] = false;
    record["error"] = e.what();
    EmitRecord(record, opt.common.output_path);
    return kExitFail;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private top-k selection and private ranking"};
  app.require_subcommand(1);

  CalibrateOptions calibrate_opt;
  CLI::App* calibrate = app.add_subcommand(
      "calibrate", "Noise scales for the pure and approximate guarantees");
  AddCommonOptions(calibrate, &calibrate_opt.common);
  calibrate->add_option("--k", calibrate_opt.k, "Elements to select");
  calibrate->add_option("--m", calibrate_opt.m, "Number of counts");
  calibrate->add_option("--eps,--epsilon", calibrate_opt.epsilon, "Privacy epsilon");
  calibrate->add_option("--delta", calibrate_opt.delta, "Privacy delta");
  calibrate->add_option("--sensitivity", calibrate_opt.sensitivity,
                        "Query sensitivity");

  TopkOptions topk_opt;
  CLI::App* topk =
      app.add_subcommand("topk", "Run a selection mechanism on a counts file");
  AddCommonOptions(topk, &topk_opt.common);
  topk->add_option("--counts", topk_opt.counts_path,
                   "Counts file, one real per line, # comments")
      ->required();
  topk->add_option("--k", topk_opt.k, "Elements to select");
  topk->add_option("--mechanism", topk_opt.mechanism, "oneshot | peeling | gumbel")
      ->check(CLI::IsMember({"oneshot", "peeling", "gumbel"}));
  topk->add_option("--lambda", topk_opt.lambda,
                   "Noise scale override (skips calibration)");
  topk->add_option("--calibration", topk_opt.calibration, "pure | approx")
      ->check(CLI::IsMember({"pure", "approx"}));
  topk->add_option("--eps,--epsilon", topk_opt.epsilon, "Privacy epsilon");
  topk->add_option("--delta", topk_opt.delta, "Privacy delta");
  topk->add_option("--sensitivity", topk_opt.sensitivity, "Query sensitivity");

  AuditOptions audit_opt;
  CLI::App* audit = app.add_subcommand(
      "audit", "Certify epsilon-hat over all adjacency corners of a counts file");
  AddCommonOptions(audit, &audit_opt.common);
  audit->add_option("--counts", audit_opt.counts_path, "Counts file")->required();
  audit->add_option("--k", audit_opt.k, "Elements to select");
  audit->add_option("--eps,--epsilon", audit_opt.epsilon, "Target epsilon");
  audit->add_option("--delta", audit_opt.delta, "Delta at which to audit");
  audit->add_option("--sensitivity", audit_opt.sensitivity, "Adjacency radius");
  audit->add_option("--lambda", audit_opt.lambda, "Noise scale override");
  audit->add_option("--calibration", audit_opt.calibration, "pure | approx")
      ->check(CLI::IsMember({"pure", "approx"}));
  audit->add_option("--method", audit_opt.method, "exact | mc")
      ->check(CLI::IsMember({"exact", "mc"}));
  audit->add_option("--trials", audit_opt.trials, "Monte Carlo trials per corner");
  audit->add_option("--corner-limit", audit_opt.corner_limit,
                    "Max corners to enumerate exhaustively");

  UtilityOptions utility_opt;
  CLI::App* utility = app.add_subcommand(
      "utility", "Analytic recovery bound vs empirical recovery frequency");
  AddCommonOptions(utility, &utility_opt.common);
  utility->add_option("--m", utility_opt.m, "Number of counts");
  utility->add_option("--k", utility_opt.k, "Elements to select (default m/2)");
  utility->add_option("--lambda", utility_opt.lambda, "Noise scale");
  utility->add_option("--gap,--gaps", utility_opt.gaps,
                      "Comma-separated consecutive gaps to sweep");
  utility->add_option("--trials", utility_opt.trials, "Trials per gap");

  RankOptions rank_opt;
  CLI::App* rank = app.add_subcommand(
      "rank", "Private top-k ranking from pairwise comparisons");
  AddCommonOptions(rank, &rank_opt.common);
  rank->add_option("--input", rank_opt.input_path, "Comparison data file");
  rank->add_option("--omega", rank_opt.omega,
                   "Comma-separated preference scores to simulate from");
  rank->add_option("--edge-prob", rank_opt.edge_prob, "Edge probability");
  rank->add_option("--L", rank_opt.L, "Comparisons per edge");
  rank->add_flag("--exact-stats", rank_opt.exact_stats,
                 "Use exact model win rates instead of sampling");
  rank->add_option("--d", rank_opt.d,
                   "Normalization override (default max degree + 1)");
  rank->add_option("--k", rank_opt.k, "Elements to select");
  rank->add_option("--eps,--epsilon", rank_opt.epsilon, "Privacy epsilon");
  rank->add_option("--delta", rank_opt.delta, "Privacy delta");
  rank->add_option("--rho", rank_opt.rho, "A-priori ergodicity bound");

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      if (e.get_exit_code() == 0) return app.exit(e);  // --help
      std::cerr << e.what() << "\n";
      return kExitInvalid;
    }

    if (calibrate->parsed()) {
      ApplyConfigFile(calibrate, calibrate_opt.common.config_path);
      return RunCalibrate(calibrate_opt);
    }
    if (topk->parsed()) {
      ApplyConfigFile(topk, topk_opt.common.config_path);
      return RunTopk(topk_opt);
    }
    if (audit->parsed()) {
      ApplyConfigFile(audit, audit_opt.common.config_path);
      return RunAudit(audit_opt);
    }
    if (utility->parsed()) {
      ApplyConfigFile(utility, utility_opt.common.config_path);
      return RunUtility(utility_opt);
    }
    if (rank->parsed()) {
      ApplyConfigFile(rank, rank_opt.common.config_path);
      return RunRank(rank_opt);
    }
    return kExitInvalid;
  } catch (const oneshot::InvalidParameterError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const oneshot::ResourceError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
}
