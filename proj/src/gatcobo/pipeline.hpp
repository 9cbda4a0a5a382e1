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

#include "gatcobo/cost_boost.hpp"
#include "gatcobo/gat.hpp"
#include "gatcobo/graph.hpp"
#include "gatcobo/metrics.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace gatcobo {

struct BoostConfig {
  std::size_t stages = 2;
  CostScheme scheme = CostScheme::kLog1p;
  // Required when scheme is kExplicit, ignored otherwise.
  std::optional<CostMatrix> explicit_cost;
  LabelCoding coding = LabelCoding::kSamme;

  void validate(int num_classes) const;
};

// Seed of stage `stage` (0-based) derived from the run seed.
std::uint64_t stageSeed(std::uint64_t seed, std::size_t stage);

// Cost matrix for a run: the explicit matrix or the scheme applied to the
// training-split class counts.
CostMatrix resolveCostMatrix(const Graph& g, const BoostConfig& boost);

// Boosting driver. Stage l trains a fresh weak classifier on X^(l-1) with
// sample weights w^(l), chains X^(l) = (beta Omega^(l))(gamma X^(l-1)) into
// the next stage, and reweights the training nodes by realized cost.
EnsembleModel trainGatCobo(const Graph& g, const GatConfig& gat, const BoostConfig& boost,
                           std::uint64_t seed);

struct Prediction {
  std::vector<int> labels;          // H(v) for every node
  Matrix scores;                    // sum_l h^(l)
  Matrix probabilities;             // row softmax of scores
  std::vector<Matrix> stage_scores; // h^(l)
};

// Inference over all nodes of `g`. Throws DataError when the graph does not
// match the model's feature width or class count.
Prediction predict(const EnsembleModel& model, const Graph& g);

Matrix softmaxRows(const Matrix& scores);

EvalReport evaluatePrediction(const Prediction& pred, const Graph& g, SplitTag tag);
EvalReport evaluate(const EnsembleModel& model, const Graph& g, SplitTag tag);

// Training-cost bound over the training nodes recorded in the model trace.
BoundReport verifyBound(const EnsembleModel& model, const Graph& g);

// Ablation without the feature-update pathway: a single GAT with `depth`
// layers trained on the attention loss alone, decided by its own softmax.
struct StackedGat {
  GatConfig config;
  WeakClassifierParams params;
  std::size_t num_features = 0;
  int num_classes = 0;
};

StackedGat trainStackedGat(const Graph& g, GatConfig config, std::size_t depth,
                           std::uint64_t seed);
Prediction predictStacked(const StackedGat& model, const Graph& g);

}  // namespace gatcobo
