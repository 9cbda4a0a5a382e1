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

#include "gatcobo/checkpoint.hpp"

#include "gatcobo/errors.hpp"

#include <fstream>
#include <memory>
#include <sstream>

namespace gatcobo {
namespace {

using nlohmann::json;

json matrixToJson(const Matrix& m) {
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.values()}};
}

Matrix matrixFromJson(const json& j) {
  return Matrix(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>(),
                j.at("data").get<std::vector<double>>());
}

json headToJson(const AttentionHeadParams& h) {
  return {{"weight", matrixToJson(h.weight.value())},
          {"att_src", matrixToJson(h.att_src.value())},
          {"att_dst", matrixToJson(h.att_dst.value())}};
}

AttentionHeadParams headFromJson(const json& j) {
  return {Tensor(matrixFromJson(j.at("weight"))), Tensor(matrixFromJson(j.at("att_src"))),
          Tensor(matrixFromJson(j.at("att_dst")))};
}

json paramsToJson(const WeakClassifierParams& p) {
  json layers = json::array();
  for (const auto& layer : p.layers) {
    json heads = json::array();
    for (const auto& h : layer.heads) heads.push_back(headToJson(h));
    layers.push_back(heads);
  }
  return {{"layers", layers},
          {"gat_head", matrixToJson(p.gat_head.value())},
          {"mix", matrixToJson(p.mix.value())}};
}

WeakClassifierParams paramsFromJson(const json& j) {
  WeakClassifierParams p;
  for (const auto& layer : j.at("layers")) {
    GatLayerParams lp;
    for (const auto& h : layer) lp.heads.push_back(headFromJson(h));
    p.layers.push_back(std::move(lp));
  }
  p.gat_head = Tensor(matrixFromJson(j.at("gat_head")));
  p.mix = Tensor(matrixFromJson(j.at("mix")));
  return p;
}

json omegaToJson(const AttentionMatrix& a) {
  return {{"offsets", a.support->offsets},
          {"targets", a.support->targets},
          {"sources", a.support->sources},
          {"values", a.values}};
}

AttentionMatrix omegaFromJson(const json& j) {
  auto csr = std::make_shared<Csr>();
  csr->offsets = j.at("offsets").get<std::vector<std::size_t>>();
  csr->targets = j.at("targets").get<std::vector<NodeId>>();
  csr->sources = j.at("sources").get<std::vector<NodeId>>();
  AttentionMatrix a;
  a.values = j.at("values").get<std::vector<double>>();
  if (csr->offsets.empty() || csr->targets.size() != csr->offsets.back() ||
      csr->sources.size() != csr->targets.size() || a.values.size() != csr->targets.size()) {
    throw DataError("checkpoint attention support is inconsistent");
  }
  a.support = std::move(csr);
  return a;
}

}  // namespace

json gatConfigToJson(const GatConfig& c) {
  return {{"hid_embedding_size", c.hid},
          {"heads", c.heads},
          {"layers_within_classifier", c.layers},
          {"dropout", c.dropout},
          {"adj_dropout", c.adj_dropout},
          {"leaky_slope", c.leaky_slope},
          {"attention_loss_weight", c.attention_loss_weight},
          {"lambda1", c.lambda1},
          {"lambda2", c.weight_decay},
          {"attention_weight", c.beta},
          {"feature_weight", c.gamma},
          {"epochs", c.epochs},
          {"learning_rate", c.learning_rate},
          {"log_clamp", c.log_clamp}};
}

GatConfig gatConfigFromJson(const json& j) {
  GatConfig c;
  c.hid = j.at("hid_embedding_size").get<std::size_t>();
  c.heads = j.at("heads").get<std::size_t>();
  c.layers = j.at("layers_within_classifier").get<std::size_t>();
  c.dropout = j.at("dropout").get<double>();
  c.adj_dropout = j.at("adj_dropout").get<double>();
  c.leaky_slope = j.at("leaky_slope").get<double>();
  c.attention_loss_weight = j.at("attention_loss_weight").get<double>();
  c.lambda1 = j.at("lambda1").get<double>();
  c.weight_decay = j.at("lambda2").get<double>();
  c.beta = j.at("attention_weight").get<double>();
  c.gamma = j.at("feature_weight").get<double>();
  c.epochs = j.at("epochs").get<std::size_t>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.log_clamp = j.at("log_clamp").get<double>();
  return c;
}

std::string serializeModel(const EnsembleModel& model) {
  json stages = json::array();
  for (const auto& s : model.stages) {
    stages.push_back({{"params", paramsToJson(s.params)},
                      {"omega", omegaToJson(s.omega)},
                      {"Z", s.Z},
                      {"costs", s.costs}});
  }
  json doc{{"format", "gatcobo-model"},
           {"version", kCheckpointVersion},
           {"config", gatConfigToJson(model.config)},
           {"cost", json::parse(model.cost.toJson())},
           {"label_coding", labelCodingName(model.coding)},
           {"num_features", model.num_features},
           {"num_classes", model.num_classes},
           {"stages", stages},
           {"trace",
            {{"train_nodes", model.trace.train_nodes},
             {"final_weights", model.trace.final_weights},
             {"final_costs", model.trace.final_costs}}}};
  return doc.dump();
}

EnsembleModel deserializeModel(const std::string& text) {
  try {
    const json doc = json::parse(text);
    if (doc.value("format", "") != "gatcobo-model") throw DataError("not a gatcobo model file");
    const int version = doc.at("version").get<int>();
    if (version != kCheckpointVersion) {
      throw DataError("unsupported checkpoint version " + std::to_string(version));
    }
    EnsembleModel m;
    m.config = gatConfigFromJson(doc.at("config"));
    const json& cost = doc.at("cost");
    m.cost.values = Matrix::fromRows(cost.at("matrix").get<std::vector<std::vector<double>>>());
    m.cost.scheme = parseCostScheme(cost.at("scheme").get<std::string>());
    m.coding = parseLabelCoding(doc.at("label_coding").get<std::string>());
    m.num_features = doc.at("num_features").get<std::size_t>();
    m.num_classes = doc.at("num_classes").get<int>();
    for (const auto& sj : doc.at("stages")) {
      WeakClassifierState s;
      s.params = paramsFromJson(sj.at("params"));
      s.omega = omegaFromJson(sj.at("omega"));
      s.Z = sj.at("Z").get<double>();
      s.costs = sj.at("costs").get<std::vector<double>>();
      m.stages.push_back(std::move(s));
    }
    const json& t = doc.at("trace");
    m.trace.train_nodes = t.at("train_nodes").get<std::vector<std::size_t>>();
    m.trace.final_weights = t.at("final_weights").get<std::vector<double>>();
    m.trace.final_costs = t.at("final_costs").get<std::vector<double>>();
    if (m.stages.empty()) throw DataError("checkpoint holds no stages");
    return m;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed checkpoint: ") + e.what());
  } catch (const DimensionError& e) {
    throw DataError(std::string("malformed checkpoint: ") + e.what());
  }
}

void saveModel(const EnsembleModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write checkpoint " + path);
  out << serializeModel(model) << '\n';
  if (!out) throw DataError("failed writing checkpoint " + path);
}

EnsembleModel loadModel(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open checkpoint " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserializeModel(ss.str());
}

}  // namespace gatcobo
