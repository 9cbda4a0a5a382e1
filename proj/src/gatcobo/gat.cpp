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

#include "gatcobo/gat.hpp"

#include "gatcobo/adam.hpp"
#include "gatcobo/cost_boost.hpp"
#include "gatcobo/errors.hpp"

#include <chrono>
#include <cmath>
#include <string>

namespace gatcobo {
namespace {

Tensor glorot(std::size_t rows, std::size_t cols, std::size_t fan_in, std::size_t fan_out,
              std::mt19937_64& rng) {
  const double s = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::uniform_real_distribution<double> u(-s, s);
  Matrix m(rows, cols);
  for (double& v : m.values()) v = u(rng);
  return Tensor(std::move(m));
}

struct WatchedParams {
  std::vector<std::vector<HeadVars>> layers;
  Var gat_head;
  Var mix;
};

WatchedParams watchAll(Tape& tape, WeakClassifierParams& params) {
  WatchedParams w;
  for (auto& layer : params.layers) {
    auto& heads = w.layers.emplace_back();
    for (auto& h : layer.heads)
      heads.push_back({tape.watch(h.weight), tape.watch(h.att_src), tape.watch(h.att_dst)});
  }
  w.gat_head = tape.watch(params.gat_head);
  w.mix = tape.watch(params.mix);
  return w;
}

}  // namespace

void GatConfig::validate() const {
  if (hid < 1) throw ConfigError("hid must be >= 1");
  if (heads < 1) throw ConfigError("heads must be >= 1");
  if (layers < 1) throw ConfigError("layers within a classifier must be >= 1");
  if (!(beta > 0.0) || !(gamma > 0.0)) throw ConfigError("beta and gamma must be > 0");
  if (!(dropout >= 0.0 && dropout < 1.0) || !(adj_dropout >= 0.0 && adj_dropout < 1.0)) {
    throw ConfigError("dropout rates must lie in [0, 1)");
  }
  if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be > 0");
  if (attention_loss_weight < 0.0 || lambda1 < 0.0 || weight_decay < 0.0) {
    throw ConfigError("loss weights must be nonnegative");
  }
  if (!(log_clamp > 0.0 && log_clamp < 1.0)) throw ConfigError("log clamp must lie in (0, 1)");
}

WeakClassifierParams WeakClassifierParams::init(std::size_t num_features, int num_classes,
                                                const GatConfig& config, std::mt19937_64& rng) {
  config.validate();
  const auto k = static_cast<std::size_t>(num_classes);
  WeakClassifierParams p;
  std::size_t d_in = num_features;
  for (std::size_t l = 0; l < config.layers; ++l) {
    auto& layer = p.layers.emplace_back();
    for (std::size_t q = 0; q < config.heads; ++q) {
      AttentionHeadParams h;
      h.weight = glorot(d_in, config.hid, d_in, config.hid, rng);
      h.att_src = glorot(config.hid, 1, 2 * config.hid, 1, rng);
      h.att_dst = glorot(config.hid, 1, 2 * config.hid, 1, rng);
      layer.heads.push_back(std::move(h));
    }
    d_in = config.hid * config.heads;
  }
  p.gat_head = glorot(config.hid, k, config.hid, k, rng);
  p.mix = glorot(num_features, k, num_features, k, rng);
  return p;
}

std::vector<Tensor*> WeakClassifierParams::tensors() {
  std::vector<Tensor*> out;
  for (auto& layer : layers)
    for (auto& h : layer.heads) {
      out.push_back(&h.weight);
      out.push_back(&h.att_src);
      out.push_back(&h.att_dst);
    }
  out.push_back(&gat_head);
  out.push_back(&mix);
  return out;
}

double AttentionMatrix::at(NodeId i, NodeId j) const {
  const std::size_t k = support->find(i, j);
  return k == support->numEntries() ? 0.0 : values[k];
}

double AttentionMatrix::rowSum(NodeId i) const {
  double s = 0.0;
  for (std::size_t k = support->offsets[i]; k < support->offsets[i + 1]; ++k) s += values[k];
  return s;
}

Matrix featureUpdate(const AttentionMatrix& omega, const Matrix& x, double beta, double gamma) {
  const Csr& a = *omega.support;
  if (omega.values.size() != a.numEntries()) {
    throw ContractError("attention values do not match their support");
  }
  if (x.rows() != a.numNodes()) {
    throw DimensionError("featureUpdate: features " + x.shapeString() + " vs " +
                         std::to_string(a.numNodes()) + " nodes");
  }
  const std::size_t f = x.cols();
  const double s = beta * gamma;
  Matrix out(x.rows(), f);
  for (std::size_t k = 0; k < a.numEntries(); ++k) {
    const double w = s * omega.values[k];
    const double* src = x.data() + a.targets[k] * f;
    double* dst = out.data() + a.sources[k] * f;
    for (std::size_t c = 0; c < f; ++c) dst[c] += w * src[c];
  }
  return out;
}

Var attentionCoefficients(Var x, const HeadVars& head, const Csr& csr, double leaky_slope) {
  if (x.cols() != head.weight.rows()) {
    throw DimensionError("attention weight " + head.weight.value().shapeString() +
                         " does not accept features " + x.value().shapeString());
  }
  const Var wh = ad::matmul(x, head.weight);
  const Var s = ad::matmul(wh, head.att_src);
  const Var t = ad::matmul(wh, head.att_dst);
  return ad::edgeSoftmax(ad::leakyRelu(ad::edgeLogits(s, t, csr), leaky_slope), csr);
}

GatLayerOutput gatLayer(Var x, std::span<const HeadVars> heads, const Csr& csr,
                        const LayerOptions& options) {
  if (heads.empty()) throw ContractError("a GAT layer needs at least one head");
  if (options.adj_dropout > 0.0 && options.rng == nullptr) {
    throw ContractError("adjacency dropout requires a random engine");
  }
  GatLayerOutput out;
  std::vector<Var> per_head;
  for (const HeadVars& h : heads) {
    const Var alpha = attentionCoefficients(x, h, csr, options.leaky_slope);
    out.attention.push_back(alpha);
    const Var a = options.adj_dropout > 0.0 ? ad::dropout(alpha, options.adj_dropout, *options.rng)
                                            : alpha;
    const Var agg = ad::spmm(a, csr, ad::matmul(x, h.weight));
    if (options.combine == HeadCombine::kConcat && options.activation == Activation::kElu) {
      per_head.push_back(ad::elu(agg));
    } else {
      per_head.push_back(agg);
    }
  }
  if (options.combine == HeadCombine::kConcat) {
    out.output = per_head.size() == 1 ? per_head.front() : ad::concatCols(per_head);
  } else {
    const Var m = per_head.size() == 1 ? per_head.front() : ad::mean(per_head);
    out.output = options.activation == Activation::kElu ? ad::elu(m) : m;
  }
  return out;
}

Var mixedLinearProbs(Var x, Var mix) {
  return ad::softmaxRows(ad::relu(ad::matmul(x, mix)));
}

Var gatLoss(Var gat_probs, std::span<const int> labels, std::span<const std::size_t> rows,
            double clamp) {
  if (rows.empty()) throw ContractError("cross-entropy over an empty training mask");
  const std::vector<double> ones(rows.size(), 1.0);
  return ad::weightedCrossEntropy(gat_probs, labels, rows, ones, clamp);
}

Var mlpLoss(Var mix_probs, std::span<const int> labels, std::span<const std::size_t> rows,
            double clamp) {
  return gatLoss(mix_probs, labels, rows, clamp);
}

ForwardResult forwardWeakClassifier(Tape& tape, const Graph& g, const Matrix& x_in,
                                    WeakClassifierParams& params, const GatConfig& config,
                                    bool training, std::mt19937_64* rng) {
  if (training && (config.dropout > 0.0 || config.adj_dropout > 0.0) && rng == nullptr) {
    throw ContractError("training-mode forward with dropout requires a random engine");
  }
  if (x_in.rows() != g.numNodes()) {
    throw DimensionError("features " + x_in.shapeString() + " for a graph of " +
                         std::to_string(g.numNodes()) + " nodes");
  }
  const Csr& csr = *g.adjacency;
  const WatchedParams w = watchAll(tape, params);
  const Var x = tape.constant(x_in);

  Var h = training ? ad::dropout(x, config.dropout, *rng) : x;
  std::vector<Var> last_attention;
  for (std::size_t l = 0; l < w.layers.size(); ++l) {
    const bool last = l + 1 == w.layers.size();
    LayerOptions opts;
    opts.combine = last ? HeadCombine::kMean : HeadCombine::kConcat;
    opts.leaky_slope = config.leaky_slope;
    opts.adj_dropout = training ? config.adj_dropout : 0.0;
    opts.rng = rng;
    GatLayerOutput out = gatLayer(h, w.layers[l], csr, opts);
    h = out.output;
    if (!last && training) h = ad::dropout(h, config.dropout, *rng);
    if (last) last_attention = std::move(out.attention);
  }

  ForwardResult r;
  r.embedding = h;
  r.gat_probs = ad::softmaxRows(ad::matmul(h, w.gat_head));
  r.omega = last_attention.size() == 1 ? last_attention.front() : ad::mean(last_attention);
  r.features_out = ad::scale(ad::spmm(r.omega, csr, x), config.beta * config.gamma);
  r.mix_probs = mixedLinearProbs(r.features_out, w.mix);
  return r;
}

namespace {

WeakClassifierState collectState(const ForwardResult& fwd, const Graph& g,
                                 const GatConfig& config) {
  WeakClassifierState s;
  s.omega.support = g.adjacency;
  s.omega.values = fwd.omega.value().values();
  s.features_out = fwd.features_out.value();
  s.gat_probs = fwd.gat_probs.value();
  s.p = fwd.mix_probs.value();
  s.h = sammeTransform(s.p, config.log_clamp);
  return s;
}

}  // namespace

WeakClassifierState inferWeakClassifier(const WeakClassifierParams& params, const Graph& g,
                                        const Matrix& x_in, const GatConfig& config) {
  WeakClassifierParams frozen = params;
  Tape tape;
  const ForwardResult fwd = forwardWeakClassifier(tape, g, x_in, frozen, config, false, nullptr);
  WeakClassifierState s = collectState(fwd, g, config);
  s.params = params;
  return s;
}

WeakClassifierState trainWeakClassifier(const Graph& g, const Matrix& x_in,
                                        std::span<const std::size_t> train_nodes,
                                        std::span<const double> weights, const GatConfig& config,
                                        std::uint64_t seed) {
  config.validate();
  if (train_nodes.empty()) throw ContractError("training mask is empty");
  if (weights.size() != train_nodes.size()) {
    throw DimensionError("sample weights do not align with training nodes");
  }
  for (double w : weights)
    if (!(w >= 0.0)) throw ContractError("sample weights must be nonnegative");

  std::mt19937_64 rng(seed);
  WeakClassifierParams params =
      WeakClassifierParams::init(x_in.cols(), g.num_classes, config, rng);
  Adam adam(params.tensors(), {.learning_rate = config.learning_rate,
                               .weight_decay = config.weight_decay});

  std::vector<double> losses, times;
  losses.reserve(config.epochs);
  times.reserve(config.epochs);
  for (std::size_t e = 0; e < config.epochs; ++e) {
    const auto t0 = std::chrono::steady_clock::now();
    Tape tape;
    const ForwardResult fwd = forwardWeakClassifier(tape, g, x_in, params, config, true, &rng);
    const Var l_gat =
        ad::weightedCrossEntropy(fwd.gat_probs, g.labels, train_nodes, weights, config.log_clamp);
    const Var l_mlp =
        ad::weightedCrossEntropy(fwd.mix_probs, g.labels, train_nodes, weights, config.log_clamp);
    const Var loss = ad::add(ad::scale(l_gat, config.attention_loss_weight),
                             ad::scale(l_mlp, config.lambda1));
    const double lv = loss.value()[0];
    if (!std::isfinite(lv)) {
      throw TrainingError("non-finite loss at epoch " + std::to_string(e + 1));
    }
    adam.zeroGrad();
    tape.backward(loss);
    adam.step();
    losses.push_back(lv);
    times.push_back(
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
  }

  Tape tape;
  const ForwardResult fwd = forwardWeakClassifier(tape, g, x_in, params, config, false, nullptr);
  WeakClassifierState s = collectState(fwd, g, config);
  s.params = std::move(params);
  s.epoch_loss = std::move(losses);
  s.epoch_ms = std::move(times);
  for (double v : s.p.values()) {
    if (!std::isfinite(v)) throw TrainingError("non-finite class probabilities after training");
  }
  return s;
}

}  // namespace gatcobo
