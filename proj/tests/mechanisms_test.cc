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
#include <vector>

#include "gtest/gtest.h"
#include "oneshot/errors.h"

namespace oneshot {
namespace {

TEST(CalibratePureTest, FormulaValues) {
  EXPECT_DOUBLE_EQ(CalibratePure(5, 1.0, 0.5).value(), 20.0);
  EXPECT_DOUBLE_EQ(CalibratePure(1, 1.0, 2.0).value(), 1.0);
}

TEST(CalibratePureTest, LinearInSensitivity) {
  const double base = CalibratePure(1, 0.5, 0.3).value();
  EXPECT_DOUBLE_EQ(CalibratePure(1, 1.0, 0.3).value(), 2.0 * base);
}

TEST(CalibratePureTest, RejectsInvalidParameters) {
  EXPECT_THROW(CalibratePure(0, 1.0, 0.1), InvalidParameterError);
  EXPECT_THROW(CalibratePure(1, 0.0, 0.1), InvalidParameterError);
  EXPECT_THROW(CalibratePure(1, 1.0, 0.0), InvalidParameterError);
  EXPECT_THROW(CalibratePure(1, 1.0, -0.1), InvalidParameterError);
}

TEST(CalibrateApproxTest, FormulaValues) {
  // 8 sqrt(ln 2000) / 0.2
  EXPECT_NEAR(CalibrateApprox(1, 100, 0.05, 0.2, 1.0).value(),
              110.27893695201877, 1e-9);
  // 40 sqrt(100 ln 1e12)
  EXPECT_NEAR(CalibrateApprox(100, 1000000, 1e-6, 0.2, 1.0).value(),
              2102.6087079027725, 1e-8);
}

TEST(CalibrateApproxTest, SqrtKScaling) {
  const double k1 = CalibrateApprox(1, 100, 0.05, 0.2, 1.0).value();
  const double k4 = CalibrateApprox(4, 100, 0.05, 0.2, 1.0).value();
  EXPECT_NEAR(k4 / k1, 2.0, 1e-14);
}

TEST(CalibrateApproxTest, RejectsDegenerateRatio) {
  EXPECT_THROW(CalibrateApprox(1, 1, 2.0, 0.2, 1.0), InvalidParameterError);
  EXPECT_THROW(CalibrateApprox(1, 100, 0.0, 0.2, 1.0), InvalidParameterError);
}

TEST(CalibrateApproxTest, MonotoneInEveryParameter) {
  RngState rng(808);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 1 + static_cast<int>(rng.NextUniform() * 20);
    const int m = k + 1 + static_cast<int>(rng.NextUniform() * 100);
    const double delta = 0.001 + 0.049 * rng.NextUniform();
    const double epsilon = 0.01 + 0.19 * rng.NextUniform();
    const double s = 0.1 + rng.NextUniform();
    const double base = CalibrateApprox(k, m, delta, epsilon, s).value();
    EXPECT_GT(CalibrateApprox(k + 1, m, delta, epsilon, s).value(), base);
    EXPECT_GT(CalibrateApprox(k, 2 * m, delta, epsilon, s).value(), base);
    EXPECT_GT(CalibrateApprox(k, m, delta / 2.0, epsilon, s).value(), base);
    EXPECT_GT(CalibrateApprox(k, m, delta, epsilon, 2.0 * s).value(), base);
    EXPECT_LT(CalibrateApprox(k, m, delta, epsilon * 1.5, s).value(), base);
  }
}

TEST(ValidatePrivacyParamsTest, EnforcesTheoremBounds) {
  ValidatePrivacyParams(PrivacyParams{0.2, 0.05, 1, 2, 1.0});
  EXPECT_THROW(ValidatePrivacyParams(PrivacyParams{0.21, 0.05, 1, 2, 1.0}),
               InvalidParameterError);
  EXPECT_THROW(ValidatePrivacyParams(PrivacyParams{0.2, 0.06, 1, 2, 1.0}),
               InvalidParameterError);
  EXPECT_THROW(ValidatePrivacyParams(PrivacyParams{0.2, 0.05, 1, 1, 1.0}),
               InvalidParameterError);
  EXPECT_THROW(ValidatePrivacyParams(PrivacyParams{0.2, 0.05, 3, 2, 1.0}),
               InvalidParameterError);
  EXPECT_THROW(ValidatePrivacyParams(PrivacyParams{0.2, 0.05, 0, 2, 1.0}),
               InvalidParameterError);
  EXPECT_THROW(ValidatePrivacyParams(PrivacyParams{0.2, 0.05, 1, 2, 0.0}),
               InvalidParameterError);
}

TEST(OneshotSelectMinTest, SelectingAllReturnsEveryIndex) {
  const CountVector x{5.0, -2.0, 7.0, 0.0};
  RngState rng(1);
  const TopKSelection selection = OneshotSelectMin(x, 4, NoiseScale(3.0), rng);
  EXPECT_EQ(selection.indices, (std::vector<int>{0, 1, 2, 3}));
}

TEST(OneshotSelectMinTest, HugeGapAlwaysRecovered) {
  // p(gap = 1e6) at lambda 1 is 1 up to double precision, so every trial
  // must pick the small count.
  const CountVector x{0.0, 1e6};
  const NoiseScale scale(1.0);
  RngState rng(17);
  for (int trial = 0; trial < 10000; ++trial) {
    RngState trial_rng = rng.Substream(trial);
    const TopKSelection selection = OneshotSelectMin(x, 1, scale, trial_rng);
    ASSERT_EQ(selection.indices, std::vector<int>{0});
  }
}

TEST(OneshotSelectMinTest, FixedSeedReplaysIdentically) {
  const CountVector x{0.3, -1.2, 0.0, 4.4, 2.2};
  RngState a(9, 2), b(9, 2);
  const TopKSelection first = OneshotSelectMin(x, 2, NoiseScale(1.0), a);
  const TopKSelection second = OneshotSelectMin(x, 2, NoiseScale(1.0), b);
  EXPECT_EQ(first.indices, second.indices);
  EXPECT_EQ(first.estimates, second.estimates);
}

TEST(OneshotSelectMinTest, RejectsInvalidK) {
  const CountVector x{1.0, 2.0};
  RngState rng(1);
  EXPECT_THROW(OneshotSelectMin(x, 0, NoiseScale(1.0), rng),
               InvalidParameterError);
  EXPECT_THROW(OneshotSelectMin(x, 3, NoiseScale(1.0), rng),
               InvalidParameterError);
}

// The estimate must carry fresh noise: conditioned on selection its error is
// centered, while the selection noise itself is biased low. This is the whole
// point of re-noising the released values.
TEST(OneshotSelectMinTest, FreshNoiseIsUnbiasedWhereSelectionNoiseIsNot) {
  const CountVector x(5, 0.0);
  const NoiseScale scale(1.0);
  RngState rng(4242);
  const int trials = 100000;
  double fresh_sum = 0.0, selection_sum = 0.0;
  int64_t n = 0;
  std::vector<double> noisy;
  std::vector<int> indices;
  for (int t = 0; t < trials; ++t) {
    RngState trial_rng = rng.Substream(t);
    internal::NoisyMinIndices(x, 2, scale, trial_rng, noisy, indices);
    for (int idx : indices) {
      // x is zero, so the noisy value is the selection noise and the fresh
      // estimate is the fresh noise.
      selection_sum += noisy[idx];
      fresh_sum += x[idx] + SampleLaplace(scale, trial_rng);
      ++n;
    }
  }
  const double se = std::sqrt(2.0) / std::sqrt(static_cast<double>(n));
  EXPECT_NEAR(fresh_sum / n, 0.0, 3.0 * se);
  EXPECT_LT(selection_sum / n, -30.0 * se);
}

TEST(OneshotSelectMinTest, TranslationLeavesSelectionUnchanged) {
  const CountVector x{0.5, 2.0, -1.0, 3.3};
  CountVector shifted = x;
  for (double& v : shifted) v += 123.25;
  for (uint64_t seed = 0; seed < 50; ++seed) {
    RngState a(seed), b(seed);
    const TopKSelection sel_x = OneshotSelectMin(x, 2, NoiseScale(1.0), a);
    const TopKSelection sel_shifted =
        OneshotSelectMin(shifted, 2, NoiseScale(1.0), b);
    ASSERT_EQ(sel_x.indices, sel_shifted.indices);
  }
}

TEST(OneshotSelectMaxTest, MatchesMinOnNegatedCounts) {
  const CountVector x{3.0, 1.0, 2.0, -0.5};
  CountVector negated = x;
  for (double& v : negated) v = -v;
  RngState a(31), b(31);
  const TopKSelection max_sel = OneshotSelectMax(x, 2, NoiseScale(1.0), a);
  const TopKSelection min_sel = OneshotSelectMin(negated, 2, NoiseScale(1.0), b);
  EXPECT_EQ(max_sel.indices, min_sel.indices);
  for (size_t i = 0; i < max_sel.estimates.size(); ++i) {
    EXPECT_DOUBLE_EQ(max_sel.estimates[i], -min_sel.estimates[i]);
  }
}

TEST(OneshotSelectMaxTest, DominantGapPicksLargest) {
  // Noise magnitudes above 0.5 at lambda 1e-3 have probability e^{-500}.
  const CountVector x{3.0, 1.0, 2.0};
  for (uint64_t seed = 0; seed < 100; ++seed) {
    RngState rng(seed);
    const TopKSelection sel = OneshotSelectMax(x, 1, NoiseScale(1e-3), rng);
    ASSERT_EQ(sel.indices, std::vector<int>{0});
  }
}

TEST(OneshotSelectMaxTest, SelectingAllReturnsEveryIndex) {
  const CountVector x{3.0, 1.0, 2.0};
  RngState rng(5);
  EXPECT_EQ(OneshotSelectMax(x, 3, NoiseScale(1.0), rng).indices,
            (std::vector<int>{0, 1, 2}));
}

TEST(ReportNoisyMinTest, SingleElement) {
  const CountVector x{0.0};
  RngState rng(2);
  EXPECT_EQ(ReportNoisyMin(x, NoiseScale(5.0), rng).index, 0);
}

TEST(ReportNoisyMinTest, AgreesWithOneshotKOne) {
  const CountVector x{0.4, -0.2, 1.7};
  RngState a(77), b(77);
  const NoisyMinResult reported = ReportNoisyMin(x, NoiseScale(2.0), a);
  const TopKSelection oneshot = OneshotSelectMin(x, 1, NoiseScale(2.0), b);
  EXPECT_EQ(reported.index, oneshot.indices[0]);
  EXPECT_DOUBLE_EQ(reported.estimate, oneshot.estimates[0]);
}

TEST(ReportNoisyMinTest, LargeGapFrequency) {
  const CountVector x{0.0, 100.0};
  const NoiseScale scale(1.0);
  RngState rng(3);
  int hits = 0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    RngState trial_rng = rng.Substream(t);
    if (ReportNoisyMin(x, scale, trial_rng).index == 0) ++hits;
  }
  EXPECT_GE(static_cast<double>(hits) / trials, 0.999);
}

TEST(PeelingSelectTest, ExhaustionIsAPermutation) {
  const CountVector x{4.0, 4.0, 4.0, 4.0, 4.0};
  RngState rng(12);
  const std::vector<NoisyMinResult> rounds =
      PeelingSelect(x, 5, NoiseScale(1.0), rng);
  std::vector<int> seen;
  for (const NoisyMinResult& r : rounds) seen.push_back(r.index);
  std::sort(seen.begin(), seen.end());
  EXPECT_EQ(seen, (std::vector<int>{0, 1, 2, 3, 4}));
}

TEST(PeelingSelectTest, SingleRoundMatchesReportNoisyMin) {
  const CountVector x{2.0, -1.0, 0.5};
  RngState a(55), b(55);
  const std::vector<NoisyMinResult> peel = PeelingSelect(x, 1, NoiseScale(1.0), a);
  const NoisyMinResult reported = ReportNoisyMin(x, NoiseScale(1.0), b);
  ASSERT_EQ(peel.size(), 1u);
  EXPECT_EQ(peel[0].index, reported.index);
  EXPECT_DOUBLE_EQ(peel[0].estimate, reported.estimate);
}

TEST(PeelingSelectTest, HugeGapsRecoverOrderedBottomK) {
  // Gaps of 100 lambda: each round misses with probability ~e^{-100}.
  const CountVector x{0.0, 100.0, 200.0, 300.0};
  const NoiseScale scale(1.0);
  RngState rng(91);
  int exact = 0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    RngState trial_rng = rng.Substream(t);
    const std::vector<NoisyMinResult> rounds = PeelingSelect(x, 3, scale, trial_rng);
    if (rounds[0].index == 0 && rounds[1].index == 1 && rounds[2].index == 2) {
      ++exact;
    }
  }
  EXPECT_GE(static_cast<double>(exact) / trials, 0.99);
}

TEST(GumbelOneshotSelectTest, SelectingAllIsAPermutation) {
  const CountVector x{1.0, 1.0, 1.0};
  RngState rng(8);
  std::vector<int> sel = GumbelOneshotSelect(x, 3, 1.0, rng);
  std::sort(sel.begin(), sel.end());
  EXPECT_EQ(sel, (std::vector<int>{0, 1, 2}));
}

TEST(GumbelOneshotSelectTest, FixedSeedReplaysIdentically) {
  const CountVector x{0.0, 0.5, -0.5, 2.0};
  RngState a(21), b(21);
  EXPECT_EQ(GumbelOneshotSelect(x, 2, 1.5, a), GumbelOneshotSelect(x, 2, 1.5, b));
}

TEST(GumbelOneshotSelectTest, SymmetricInputIsUniform) {
  const CountVector x{0.0, 0.0, 0.0};
  RngState rng(6);
  int counts[3] = {0, 0, 0};
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    RngState trial_rng = rng.Substream(t);
    ++counts[GumbelOneshotSelect(x, 1, 1.0, trial_rng)[0]];
  }
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(static_cast<double>(counts[i]) / trials, 1.0 / 3.0, 0.02);
  }
}

}  // namespace
}  // namespace oneshot
