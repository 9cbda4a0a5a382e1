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

#include "gatcobo/pipeline.hpp"

#include "gatcobo/errors.hpp"

#include <algorithm>
#include <cmath>

namespace gatcobo {
namespace {

void checkCompatible(std::size_t num_features, int num_classes, const Graph& g) {
  if (g.numFeatures() != num_features || g.num_classes != num_classes) {
    throw DataError("model expects " + std::to_string(num_features) + " features and " +
                    std::to_string(num_classes) + " classes; graph has " +
                    std::to_string(g.numFeatures()) + " features and " +
                    std::to_string(g.num_classes) + " classes");
  }
}

}  // namespace

void BoostConfig::validate(int num_classes) const {
  if (stages < 1) throw ConfigError("boosting needs at least one stage");
  if (scheme == CostScheme::kExplicit) {
    if (!explicit_cost) throw ConfigError("explicit cost scheme without a cost matrix");
    explicit_cost->validate();
    if (static_cast<int>(explicit_cost->numClasses()) != num_classes) {
      throw ConfigError("cost matrix is " + explicit_cost->values.shapeString() + " but the graph has " +
                        std::to_string(num_classes) + " classes");
    }
  }
}

std::uint64_t stageSeed(std::uint64_t seed, std::size_t stage) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(stage) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

CostMatrix resolveCostMatrix(const Graph& g, const BoostConfig& boost) {
  if (boost.scheme == CostScheme::kExplicit) return *boost.explicit_cost;
  const auto counts = g.classCounts(SplitTag::kTrain);
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] == 0) {
      throw DataError("class " + std::to_string(k) + " has no training nodes");
    }
  }
  return buildCostMatrix(counts, boost.scheme);
}

EnsembleModel trainGatCobo(const Graph& g, const GatConfig& gat, const BoostConfig& boost,
                           std::uint64_t seed) {
  gat.validate();
  boost.validate(g.num_classes);
  g.validate();

  EnsembleModel model;
  model.config = gat;
  model.coding = boost.coding;
  model.num_features = g.numFeatures();
  model.num_classes = g.num_classes;
  model.cost = resolveCostMatrix(g, boost);

  const std::vector<std::size_t> train = g.nodesIn(SplitTag::kTrain);
  if (train.empty()) throw DataError("graph has no training nodes");
  std::vector<double> w(train.size(), 1.0 / static_cast<double>(train.size()));
  std::vector<double> costs(train.size(), 0.0);

  Matrix x = g.features;
  for (std::size_t l = 0; l < boost.stages; ++l) {
    WeakClassifierState s = trainWeakClassifier(g, x, train, w, gat, stageSeed(seed, l));
    for (std::size_t i = 0; i < train.size(); ++i) {
      costs[i] = misclassificationCost(s.h.row(train[i]), g.labels[train[i]], model.cost);
    }
    WeightUpdate upd =
        updateWeights(w, s.p, g.labels, train, costs, boost.coding, gat.log_clamp);
    w = std::move(upd.weights);
    s.Z = upd.Z;
    s.costs = costs;
    x = s.features_out;
    model.stages.push_back(std::move(s));
  }
  model.trace.train_nodes = train;
  model.trace.final_weights = w;
  model.trace.final_costs = costs;
  return model;
}

Matrix softmaxRows(const Matrix& scores) {
  Matrix out(scores.rows(), scores.cols());
  for (std::size_t r = 0; r < scores.rows(); ++r) {
    const auto row = scores.row(r);
    const double mx = *std::max_element(row.begin(), row.end());
    double sum = 0.0;
    for (std::size_t k = 0; k < scores.cols(); ++k) {
      out(r, k) = std::exp(row[k] - mx);
      sum += out(r, k);
    }
    for (std::size_t k = 0; k < scores.cols(); ++k) out(r, k) /= sum;
  }
  return out;
}

Prediction predict(const EnsembleModel& model, const Graph& g) {
  if (model.stages.empty()) throw ContractError("model has no stages");
  checkCompatible(model.num_features, model.num_classes, g);
  Prediction pred;
  Matrix x = g.features;
  for (const auto& stage : model.stages) {
    WeakClassifierState s = inferWeakClassifier(stage.params, g, x, model.config);
    pred.stage_scores.push_back(std::move(s.h));
    x = std::move(s.features_out);
  }
  EnsembleDecision d = ensembleDecision(pred.stage_scores);
  pred.labels = std::move(d.labels);
  pred.scores = std::move(d.scores);
  pred.probabilities = softmaxRows(pred.scores);
  return pred;
}

EvalReport evaluatePrediction(const Prediction& pred, const Graph& g, SplitTag tag) {
  const std::vector<std::size_t> nodes = g.nodesIn(tag);
  std::vector<int> predicted, truth;
  Matrix scores(nodes.size(), static_cast<std::size_t>(g.num_classes));
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    predicted.push_back(pred.labels[nodes[i]]);
    truth.push_back(g.labels[nodes[i]]);
    const auto row = pred.probabilities.row(nodes[i]);
    std::copy(row.begin(), row.end(), scores.row(i).begin());
  }
  return makeReport(predicted, truth, scores, g.num_classes, splitName(tag));
}

EvalReport evaluate(const EnsembleModel& model, const Graph& g, SplitTag tag) {
  return evaluatePrediction(predict(model, g), g, tag);
}

BoundReport verifyBound(const EnsembleModel& model, const Graph& g) {
  const Prediction pred = predict(model, g);
  const auto& nodes = model.trace.train_nodes;
  std::vector<int> truth, decision;
  for (std::size_t v : nodes) {
    if (v >= g.numNodes()) throw DataError("recorded training node outside the graph");
    truth.push_back(g.labels[v]);
    decision.push_back(pred.labels[v]);
  }
  std::vector<double> z;
  for (const auto& s : model.stages) z.push_back(s.Z);
  return gatcobo::verifyBound(truth, decision, model.trace.final_costs, model.trace.final_weights,
                              z, model.num_classes);
}

StackedGat trainStackedGat(const Graph& g, GatConfig config, std::size_t depth,
                           std::uint64_t seed) {
  if (depth < 1) throw ConfigError("stacked GAT needs at least one layer");
  config.layers = depth;
  config.lambda1 = 0.0;
  const std::vector<std::size_t> train = g.nodesIn(SplitTag::kTrain);
  if (train.empty()) throw DataError("graph has no training nodes");
  const std::vector<double> w(train.size(), 1.0 / static_cast<double>(train.size()));
  WeakClassifierState s = trainWeakClassifier(g, g.features, train, w, config, stageSeed(seed, 0));
  return {config, std::move(s.params), g.numFeatures(), g.num_classes};
}

Prediction predictStacked(const StackedGat& model, const Graph& g) {
  checkCompatible(model.num_features, model.num_classes, g);
  WeakClassifierState s = inferWeakClassifier(model.params, g, g.features, model.config);
  Prediction pred;
  pred.stage_scores.push_back(sammeTransform(s.gat_probs, model.config.log_clamp));
  EnsembleDecision d = ensembleDecision(pred.stage_scores);
  pred.labels = std::move(d.labels);
  pred.scores = std::move(d.scores);
  pred.probabilities = std::move(s.gat_probs);
  return pred;
}

}  // namespace gatcobo
