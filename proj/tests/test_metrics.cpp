/*
 * Copyright 2026 The gatcobo Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "gatcobo/errors.hpp"
#include "gatcobo/metrics.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace gatcobo {
namespace {

// Fraction of correctly ordered positive/negative pairs, ties counted as half.
double pairwiseAuc(std::span<const double> s, std::span<const int> y, int pos) {
  double good = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (y[i] != pos) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[j] == pos) continue;
      pairs += 1.0;
      good += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
    }
  }
  return good / pairs;
}

std::vector<double> column(const Matrix& m, std::size_t k) {
  std::vector<double> out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) out[r] = m(r, k);
  return out;
}

TEST(ConfusionMatrix, HandCase) {
  const std::vector<int> truth{0, 0, 1, 1}, pred{0, 1, 1, 1};
  const Confusion expected{{1, 1}, {0, 2}};
  EXPECT_EQ(confusionMatrix(pred, truth, 2), expected);
}

TEST(ConfusionMatrix, DiagonalAndSingleColumn) {
  const std::vector<int> truth{0, 1, 2, 2, 1};
  const Confusion d = confusionMatrix(truth, truth, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      if (i != j) EXPECT_EQ(d[i][j], 0u);
  const std::vector<int> zeros(5, 0);
  const Confusion c = confusionMatrix(zeros, truth, 3);
  std::size_t total = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    total += c[i][0];
    EXPECT_EQ(c[i][1] + c[i][2], 0u);
  }
  EXPECT_EQ(total, truth.size());
}

TEST(ConfusionMatrix, Errors) {
  const std::vector<int> a{0, 1}, b{0, 1, 1}, bad{0, 2};
  EXPECT_THROW(confusionMatrix(a, b, 2), ContractError);
  EXPECT_THROW(confusionMatrix(bad, a, 2), ContractError);
  EXPECT_THROW(confusionMatrix(a, bad, 2), ContractError);
}

TEST(MacroRecall, Examples) {
  EXPECT_EQ(macroRecall({{4, 0}, {0, 3}}), 1.0);
  EXPECT_DOUBLE_EQ(macroRecall({{1, 1}, {0, 2}}), 0.75);
  EXPECT_DOUBLE_EQ(macroRecall({{3, 3}, {0, 6}}), macroRecall({{1, 1}, {0, 2}}));
}

TEST(MacroRecall, ZeroSupportExcludedWithWarning) {
  std::vector<std::string> warnings;
  const double r = macroRecall({{2, 1, 0}, {0, 0, 0}, {0, 1, 3}}, &warnings);
  EXPECT_DOUBLE_EQ(r, (2.0 / 3.0 + 3.0 / 4.0) / 2.0);
  EXPECT_EQ(warnings.size(), 1u);
}

TEST(MacroF1, Examples) {
  EXPECT_EQ(macroF1({{4, 0}, {0, 3}}), 1.0);
  EXPECT_NEAR(macroF1({{1, 1}, {0, 2}}), (2.0 / 3.0 + 0.8) / 2.0, 1e-15);
  EXPECT_NEAR(macroF1({{1, 1}, {0, 2}}), 0.7333, 5e-5);
}

TEST(MacroF1, AbsentAndUnpredictedClassExcluded) {
  std::vector<std::string> warnings;
  EXPECT_NEAR(macroF1({{1, 1, 0}, {0, 2, 0}, {0, 0, 0}}, &warnings), 0.73333333, 1e-8);
  EXPECT_FALSE(warnings.empty());
}

TEST(MacroF1, NeverPredictedClassScoresZero) {
  // Class 1 is present but never predicted: P + R = 0 gives F1 = 0.
  EXPECT_NEAR(macroF1({{3, 0}, {2, 0}}), (2.0 * 0.6 * 1.0 / 1.6) / 2.0, 1e-15);
}

TEST(GMean, Examples) {
  EXPECT_EQ(gMean({{4, 0}, {0, 3}}), 1.0);
  EXPECT_EQ(gMean({{0, 5}, {0, 5}}), 0.0);
  EXPECT_DOUBLE_EQ(gMean({{3, 1}, {1, 3}}), 0.75);
  EXPECT_NEAR(gMean({{1, 1, 0}, {0, 2, 0}, {1, 0, 3}}), std::cbrt(0.5 * 1.0 * 0.75), 1e-15);
}

TEST(GMean, BinaryNeverExceedsMacroRecall) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<std::size_t> u(0, 20);
  for (int t = 0; t < 200; ++t) {
    Confusion c{{u(rng) + 1, u(rng)}, {u(rng), u(rng) + 1}};
    EXPECT_LE(gMean(c), macroRecall(c) + 1e-15);
  }
}

TEST(RankAuc, PerfectAndTied) {
  const std::vector<int> y{0, 1, 0, 1};
  const std::vector<double> perfect{0.1, 0.9, 0.2, 0.8}, tied(4, 0.3);
  EXPECT_EQ(rankAuc(perfect, y, 1), 1.0);
  EXPECT_EQ(rankAuc(tied, y, 1), 0.5);
  EXPECT_EQ(rankAuc(tied, y, 0), 0.5);
}

TEST(RankAuc, SixNodeHandCase) {
  const std::vector<int> y{1, 0, 0, 1, 0, 0};
  const std::vector<double> s{0.7, 0.8, 0.1, 0.4, 0.4, 0.2};
  // Pairs: 0.7 beats 3 of 4, 0.4 beats 2 and ties 1 of 4.
  EXPECT_DOUBLE_EQ(rankAuc(s, y, 1), (3.0 + 2.5) / 8.0);
  EXPECT_DOUBLE_EQ(rankAuc(s, y, 1), pairwiseAuc(s, y, 1));
}

TEST(RankAuc, MissingClassIsNaN) {
  const std::vector<int> y{0, 0};
  const std::vector<double> s{0.1, 0.2};
  EXPECT_TRUE(std::isnan(rankAuc(s, y, 1)));
}

TEST(MacroAuc, MatchesPairwiseOracle) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k = 2 + trial % 3, n = 5 + rng() % 96;
    Matrix s(n, k);
    std::uniform_int_distribution<int> coarse(0, 6);  // forces ties
    for (double& v : s.values()) v = coarse(rng) / 6.0;
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = static_cast<int>(i < k ? i : rng() % k);
    double mean = 0.0;
    for (std::size_t c = 0; c < k; ++c) mean += pairwiseAuc(column(s, c), y, static_cast<int>(c));
    mean /= static_cast<double>(k);
    EXPECT_NEAR(macroAUC(s, y), mean, 1e-12);
  }
}

TEST(MacroAuc, AbsentClassExcludedWithWarning) {
  const Matrix s = Matrix::fromRows({{0.9, 0.1, 0.0}, {0.2, 0.7, 0.1}, {0.6, 0.3, 0.1}});
  const std::vector<int> y{0, 1, 0};
  std::vector<std::string> warnings;
  const double auc = macroAUC(s, y, &warnings);
  EXPECT_EQ(auc, 1.0);
  EXPECT_EQ(warnings.size(), 1u);
}

TEST(Metrics, InvariantUnderClassRelabeling) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 2 + trial % 3;
    const std::size_t n = 40;
    std::vector<int> y(n), p(n);
    Matrix s(n, k);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = static_cast<int>(i < static_cast<std::size_t>(k) ? i : rng() % k);
      p[i] = static_cast<int>(rng() % k);
      for (int c = 0; c < k; ++c) s(i, c) = u(rng);
    }
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<int> y2(n), p2(n);
    Matrix s2(n, k);
    for (std::size_t i = 0; i < n; ++i) {
      y2[i] = perm[y[i]];
      p2[i] = perm[p[i]];
      for (int c = 0; c < k; ++c) s2(i, perm[c]) = s(i, c);
    }
    const Confusion c1 = confusionMatrix(p, y, k), c2 = confusionMatrix(p2, y2, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) EXPECT_EQ(c1[i][j], c2[perm[i]][perm[j]]);
    EXPECT_NEAR(macroRecall(c1), macroRecall(c2), 1e-12);
    EXPECT_NEAR(macroF1(c1), macroF1(c2), 1e-12);
    EXPECT_NEAR(gMean(c1), gMean(c2), 1e-12);
    EXPECT_NEAR(macroAUC(s, y), macroAUC(s2, y2), 1e-12);
  }
}

TEST(EvalReport, InvariantsAndJson) {
  std::mt19937_64 rng(30);
  const std::size_t n = 60;
  const Matrix s = testing::randomProbabilities(n, 3, rng);
  std::vector<int> y(n), p(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = static_cast<int>(rng() % 3);
    p[i] = static_cast<int>(rng() % 3);
  }
  const EvalReport r = makeReport(p, y, s, 3, "test");
  std::size_t total = 0;
  for (const auto& row : r.confusion) total += std::accumulate(row.begin(), row.end(), std::size_t{0});
  EXPECT_EQ(total, n);
  EXPECT_EQ(r.num_nodes, n);
  for (double v : {r.accuracy, r.macro_recall, r.macro_f1, r.macro_auc, r.g_mean}) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
  ASSERT_EQ(r.per_class.size(), 3u);
  double mean_recall = 0.0;
  for (const auto& c : r.per_class) mean_recall += c.recall / 3.0;
  EXPECT_NEAR(mean_recall, r.macro_recall, 1e-12);

  EvalReport timed = r;
  timed.wall_time_per_epoch_ms = {1.5, 2.5};
  const auto j = timed.toJson();
  for (const char* key : {"split", "confusion", "macro_recall", "macro_f1", "macro_auc", "g_mean",
                          "per_class"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_FALSE(j.contains("wall_time_per_epoch_ms"));
  EXPECT_TRUE(timed.toJson(true).contains("wall_time_per_epoch_ms"));
  EXPECT_EQ(r.toJson().dump(), makeReport(p, y, s, 3, "test").toJson().dump());
}

}  // namespace
}  // namespace gatcobo
