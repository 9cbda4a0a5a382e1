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

#pragma once

#include "gatcobo/gat.hpp"
#include "gatcobo/graph.hpp"
#include "gatcobo/matrix.hpp"

#include <span>
#include <string>
#include <vector>

namespace gatcobo {

enum class CostScheme { kUniform, kInverse, kLog1p, kExplicit };

const char* costSchemeName(CostScheme scheme);
CostScheme parseCostScheme(const std::string& name);

// K x K misclassification costs; entry (i, j) is the cost of predicting j for
// a node whose true class is i.
struct CostMatrix {
  Matrix values;
  CostScheme scheme = CostScheme::kUniform;

  std::size_t numClasses() const { return values.rows(); }
  double operator()(std::size_t truth, std::size_t predicted) const {
    return values(truth, predicted);
  }

  // False when some row is strictly greater than another row in every column.
  bool satisfiesRowDominance() const;
  // Square, finite, nonnegative; explicit matrices must also satisfy row
  // dominance.
  void validate() const;

  // {"scheme": "explicit", "matrix": [[...], ...]}
  static CostMatrix fromJson(const std::string& text);
  std::string toJson() const;
};

// uniform: 1; inverse: |C_j| / |C_i|; log1p: ln(1 + |C_j| / |C_i|). The
// formulas apply on the diagonal too.
CostMatrix buildCostMatrix(std::span<const std::size_t> class_counts, CostScheme scheme);

// Index of the largest entry, lowest index on ties.
std::size_t argmax(std::span<const double> row);

// h_k = (K - 1) (log p_k - mean_k' log p_k'), with p clamped below at `clamp`.
Matrix sammeTransform(const Matrix& p, double clamp = 1e-12);

double misclassificationCost(std::span<const double> h_row, int true_label,
                             const CostMatrix& costs);

// kSamme recodes the label as 1 at the true class and -1/(K-1) elsewhere;
// kOneHot uses the plain indicator vector.
enum class LabelCoding { kSamme, kOneHot };

const char* labelCodingName(LabelCoding coding);
LabelCoding parseLabelCoding(const std::string& name);

struct WeightUpdate {
  std::vector<double> weights;  // renormalized, aligned with `rows`
  double Z = 0.0;               // sum before renormalization
};

// w_v <- w_v exp(-((K-1)/K) C_v y_v . log p(v)), then renormalized.
WeightUpdate updateWeights(std::span<const double> weights, const Matrix& p,
                           std::span<const int> labels, std::span<const std::size_t> rows,
                           std::span<const double> costs, LabelCoding coding,
                           double clamp = 1e-12);

// Single-node multiplier of the update above (before renormalization).
double weightMultiplier(std::span<const double> p_row, int true_label, double cost,
                        LabelCoding coding, double clamp = 1e-12);

struct EnsembleDecision {
  std::vector<int> labels;
  Matrix scores;  // sum over stages of h
};

// H(v) = argmax_k sum_l h_k^(l)(v), ties toward the lowest class index.
EnsembleDecision ensembleDecision(std::span<const Matrix> stage_scores);

// Boosting bookkeeping kept with a trained model so the training-cost bound
// can be checked after the fact.
struct BoostTrace {
  std::vector<std::size_t> train_nodes;
  std::vector<double> final_weights;  // D^(L+1), aligned with train_nodes
  std::vector<double> final_costs;    // C_i realized at the last stage
};

struct EnsembleModel {
  GatConfig config;
  CostMatrix cost;
  LabelCoding coding = LabelCoding::kSamme;
  std::size_t num_features = 0;
  int num_classes = 0;
  std::vector<WeakClassifierState> stages;
  BoostTrace trace;

  std::size_t numStages() const { return stages.size(); }
};

struct BoundReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double d = 0.0;
  double prod_z = 1.0;
  std::size_t n = 0;
  std::size_t misclassified = 0;
  std::size_t excluded = 0;  // nodes with C_i = 0 when L >= 2
  int num_classes = 0;
  std::size_t num_stages = 0;
  bool holds = false;
  std::string cost_binding = "final-stage";

  double slack() const { return rhs - lhs; }
  std::string toJson() const;
};

// sum_i C_i 1[H(x_i) != y_i]  <=  n K^L d prod_l Z_l,
// d = sum_i D^(L+1)(x_i) / C_i^(L-1). Inputs align with the training nodes.
BoundReport verifyBound(std::span<const int> truth, std::span<const int> decision,
                        std::span<const double> costs, std::span<const double> final_weights,
                        std::span<const double> z, int num_classes);

}  // namespace gatcobo
