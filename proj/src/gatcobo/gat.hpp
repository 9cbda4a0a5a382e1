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

#include "gatcobo/autodiff.hpp"
#include "gatcobo/graph.hpp"

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <vector>

namespace gatcobo {

struct GatConfig {
  std::size_t hid = 64;
  std::size_t heads = 1;
  // GAT layers inside one weak classifier. Hidden layers concatenate their
  // heads; the last layer averages them so the embedding width stays `hid`.
  std::size_t layers = 1;
  double dropout = 0.0;
  double adj_dropout = 0.0;
  double leaky_slope = 0.2;
  // Scalar on the attention-branch loss.
  double attention_loss_weight = 1.0;
  // Scalar on the mixed-linear-branch loss.
  double lambda1 = 1.0;
  // L2 strength, applied as Adam weight decay.
  double weight_decay = 5e-4;
  // Feature-update scalars: X_next = (beta * Omega) (gamma * X).
  double beta = 1.0;
  double gamma = 1.0;
  std::size_t epochs = 200;
  double learning_rate = 0.005;
  double log_clamp = 1e-12;

  void validate() const;
};

struct AttentionHeadParams {
  Tensor weight;   // d_in x hid
  Tensor att_src;  // hid x 1, first half of a
  Tensor att_dst;  // hid x 1, second half of a
};

struct GatLayerParams {
  std::vector<AttentionHeadParams> heads;
};

struct WeakClassifierParams {
  std::vector<GatLayerParams> layers;
  Tensor gat_head;  // hid x K, maps the embedding to class scores
  Tensor mix;       // d x K, the mixed-linear layer

  // Glorot-uniform initialization, s = sqrt(6 / (fan_in + fan_out)).
  static WeakClassifierParams init(std::size_t num_features, int num_classes,
                                   const GatConfig& config, std::mt19937_64& rng);
  std::vector<Tensor*> tensors();
};

// Attention matrix Omega stored on the adjacency support: values[k] is the
// coefficient of Csr entry k; every pair off the support is zero.
struct AttentionMatrix {
  std::shared_ptr<const Csr> support = std::make_shared<Csr>();
  std::vector<double> values;

  double at(NodeId i, NodeId j) const;
  double rowSum(NodeId i) const;
};

// X_next = (beta * Omega) * (gamma * X).
Matrix featureUpdate(const AttentionMatrix& omega, const Matrix& x, double beta, double gamma);

enum class Activation { kElu, kIdentity };
enum class HeadCombine { kConcat, kMean };

struct HeadVars {
  Var weight;
  Var att_src;
  Var att_dst;
};

// alpha_ij = softmax_{j in N(i)} LeakyReLU(a_src . Wh_i + a_dst . Wh_j), one
// value per Csr entry.
Var attentionCoefficients(Var x, const HeadVars& head, const Csr& csr, double leaky_slope);

struct GatLayerOutput {
  Var output;
  std::vector<Var> attention;  // per head, before adjacency dropout
};

struct LayerOptions {
  HeadCombine combine = HeadCombine::kConcat;
  Activation activation = Activation::kElu;
  double leaky_slope = 0.2;
  double adj_dropout = 0.0;
  std::mt19937_64* rng = nullptr;  // required when adj_dropout > 0
};

// sigma(sum_j alpha_ij W h_j) per head, heads concatenated or averaged. With
// kConcat the activation applies per head; with kMean it applies after
// averaging.
GatLayerOutput gatLayer(Var x, std::span<const HeadVars> heads, const Csr& csr,
                        const LayerOptions& options);

// p_k(v) = softmax_k(ReLU(x_v . mix)).
Var mixedLinearProbs(Var x, Var mix);

// Unweighted cross-entropy over `rows` for either branch.
Var gatLoss(Var gat_probs, std::span<const int> labels, std::span<const std::size_t> rows,
            double clamp = 1e-12);
Var mlpLoss(Var mix_probs, std::span<const int> labels, std::span<const std::size_t> rows,
            double clamp = 1e-12);

struct ForwardResult {
  Var embedding;     // z, N x hid
  Var gat_probs;     // softmax(z . gat_head)
  Var omega;         // nnz x 1, head-averaged attention of the last layer
  Var features_out;  // (beta Omega)(gamma X)
  Var mix_probs;     // p, N x K
};

// One forward pass of a weak classifier. In training mode dropout and
// adjacency dropout are active and `rng` must be set.
ForwardResult forwardWeakClassifier(Tape& tape, const Graph& g, const Matrix& x_in,
                                    WeakClassifierParams& params, const GatConfig& config,
                                    bool training, std::mt19937_64* rng);

struct WeakClassifierState {
  WeakClassifierParams params;
  AttentionMatrix omega;
  Matrix features_out;
  Matrix gat_probs;
  Matrix p;
  Matrix h;
  double Z = 1.0;
  std::vector<double> costs;  // realized cost per training node, set by boosting
  std::vector<double> epoch_loss;
  std::vector<double> epoch_ms;
};

// Full-batch Adam on w_v (attention_loss_weight * L_GAT + lambda1 * L_MLP)
// with weight decay. `weights` align with `train_nodes` and are nonnegative.
// The returned state holds an eval-mode pass with the final parameters.
WeakClassifierState trainWeakClassifier(const Graph& g, const Matrix& x_in,
                                        std::span<const std::size_t> train_nodes,
                                        std::span<const double> weights, const GatConfig& config,
                                        std::uint64_t seed);

// Eval-mode pass with fixed parameters; fills omega, features_out, gat_probs,
// p and h.
WeakClassifierState inferWeakClassifier(const WeakClassifierParams& params, const Graph& g,
                                        const Matrix& x_in, const GatConfig& config);

}  // namespace gatcobo
