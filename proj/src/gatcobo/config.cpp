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

#include "gatcobo/config.hpp"

#include "gatcobo/errors.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace gatcobo {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using Handler = std::function<void(const json&)>;

void dispatch(const json& obj, const std::string& where,
              const std::map<std::string, Handler>& handlers) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    const auto it = handlers.find(key);
    if (it == handlers.end()) throw ConfigError("unknown key '" + key + "' in " + where);
    try {
      it->second(value);
    } catch (const json::exception& e) {
      throw ConfigError("bad value for '" + key + "' in " + where + ": " + e.what());
    }
  }
}

template <typename T>
Handler into(T& slot) {
  return [&slot](const json& v) { slot = v.get<T>(); };
}

Handler intoSize(std::size_t& slot) {
  return [&slot](const json& v) {
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      throw ConfigError("expected a nonnegative integer, got " + v.dump());
    }
    slot = v.get<std::size_t>();
  };
}

std::string resolvePath(const std::string& p, const std::string& base) {
  if (p.empty() || base.empty() || fs::path(p).is_absolute()) return p;
  return (fs::path(base) / p).lexically_normal().string();
}

void parseSynthetic(const json& j, SyntheticSpec& s) {
  dispatch(j, "synthetic",
           {{"nodes_per_class", into(s.nodes_per_class)},
            {"intra_class_edge_prob", into(s.intra_class_edge_prob)},
            {"inter_class_edge_prob", into(s.inter_class_edge_prob)},
            {"feature_dim", intoSize(s.feature_dim)},
            {"class_mean_separation", into(s.class_mean_separation)},
            {"feature_noise_std", into(s.feature_noise_std)}});
}

void parseDataset(const json& j, DatasetConfig& d, const std::string& base) {
  dispatch(j, "dataset",
           {{"kind", into(d.kind)},
            {"nodes", [&](const json& v) { d.nodes_path = resolvePath(v.get<std::string>(), base); }},
            {"edges", [&](const json& v) { d.edges_path = resolvePath(v.get<std::string>(), base); }},
            {"splits", [&](const json& v) { d.splits_path = resolvePath(v.get<std::string>(), base); }},
            {"self_loops", into(d.load.self_loops)},
            {"standardize", into(d.load.standardize)},
            {"num_classes", into(d.load.num_classes)},
            {"synthetic", [&](const json& v) { parseSynthetic(v, d.synthetic); }}});
}

void parseSplit(const json& j, SplitSpec& s) {
  dispatch(j, "split",
           {{"train_fraction", into(s.train_fraction)},
            {"val_fraction", into(s.val_fraction)},
            {"test_fraction", into(s.test_fraction)},
            {"stratified", into(s.stratified)}});
}

void parseSweep(const json& j, SweepConfig& s) {
  dispatch(j, "sweep",
           {{"ir_list", into(s.ir_list)},
            {"layer_list", into(s.layer_list)},
            {"seeds", into(s.seeds)},
            {"train_fractions", into(s.train_fractions)},
            {"hids", into(s.hids)},
            {"learning_rates", into(s.learning_rates)},
            {"timing_runs", intoSize(s.timing_runs)},
            {"ablation", into(s.ablation)}});
}

void parseCost(const json& j, BoostConfig& b) {
  if (j.is_string()) {
    b.scheme = parseCostScheme(j.get<std::string>());
    if (b.scheme == CostScheme::kExplicit) {
      throw ConfigError("explicit cost needs an object with a matrix");
    }
    return;
  }
  CostMatrix m = CostMatrix::fromJson(j.dump());
  b.scheme = m.scheme;
  if (m.scheme == CostScheme::kExplicit) b.explicit_cost = std::move(m);
}

std::string readFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

void RunConfig::validate() const {
  try {
    gat.validate();
    split.validate();
    if (dataset.kind == "synthetic") {
      dataset.synthetic.validate();
    } else if (dataset.kind == "files") {
      if (dataset.nodes_path.empty() || dataset.edges_path.empty()) {
        throw ConfigError("file dataset needs both nodes and edges paths");
      }
    } else {
      throw ConfigError("dataset kind must be 'synthetic' or 'files', got '" + dataset.kind + "'");
    }
    if (boost.stages < 1) throw ConfigError("model_layers must be at least 1");
    if (boost.scheme == CostScheme::kExplicit && !boost.explicit_cost) {
      throw ConfigError("explicit cost scheme without a cost matrix");
    }
    if (sweep.timing_runs < 1) throw ConfigError("timing_runs must be at least 1");
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

json RunConfig::toJson() const {
  json ds{{"kind", dataset.kind},
          {"self_loops", dataset.load.self_loops},
          {"standardize", dataset.load.standardize},
          {"num_classes", dataset.load.num_classes}};
  if (dataset.kind == "files") {
    ds["nodes"] = dataset.nodes_path;
    ds["edges"] = dataset.edges_path;
    if (!dataset.splits_path.empty()) ds["splits"] = dataset.splits_path;
  } else {
    const auto& s = dataset.synthetic;
    ds["synthetic"] = {{"nodes_per_class", s.nodes_per_class},
                       {"intra_class_edge_prob", s.intra_class_edge_prob},
                       {"inter_class_edge_prob", s.inter_class_edge_prob},
                       {"feature_dim", s.feature_dim},
                       {"class_mean_separation", s.class_mean_separation},
                       {"feature_noise_std", s.feature_noise_std}};
  }
  json cost = boost.scheme == CostScheme::kExplicit ? json::parse(boost.explicit_cost->toJson())
                                                    : json(costSchemeName(boost.scheme));
  return {{"dataset", ds},
          {"split",
           {{"train_fraction", split.train_fraction},
            {"val_fraction", split.val_fraction},
            {"test_fraction", split.test_fraction},
            {"stratified", split.stratified}}},
          {"hid_embedding_size", gat.hid},
          {"heads", gat.heads},
          {"layers_within_classifier", gat.layers},
          {"learning_rate", gat.learning_rate},
          {"dropout", gat.dropout},
          {"adj_dropout", gat.adj_dropout},
          {"leaky_slope", gat.leaky_slope},
          {"attention_loss_weight", gat.attention_loss_weight},
          {"lambda1", gat.lambda1},
          {"lambda2", gat.weight_decay},
          {"attention_weight", gat.beta},
          {"feature_weight", gat.gamma},
          {"epochs", gat.epochs},
          {"log_clamp", gat.log_clamp},
          {"model_layers", boost.stages},
          {"cost", cost},
          {"label_coding", labelCodingName(boost.coding)},
          {"seed", seed},
          {"output_dir", output_dir},
          {"sweep",
           {{"ir_list", sweep.ir_list},
            {"layer_list", sweep.layer_list},
            {"seeds", sweep.seeds},
            {"train_fractions", sweep.train_fractions},
            {"hids", sweep.hids},
            {"learning_rates", sweep.learning_rates},
            {"timing_runs", sweep.timing_runs},
            {"ablation", sweep.ablation}}}};
}

RunConfig parseRunConfig(const std::string& text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig c;
  if (j.is_object() && j.contains("preset")) {
    c = presetConfig(j.at("preset").get<std::string>());
    j.erase("preset");
  }
  bool seed_given = false;
  std::uint64_t seed = c.seed;
  try {
    dispatch(j, "config",
             {{"dataset", [&](const json& v) { parseDataset(v, c.dataset, base_dir); }},
              {"split", [&](const json& v) { parseSplit(v, c.split); }},
              {"hid_embedding_size", intoSize(c.gat.hid)},
              {"heads", intoSize(c.gat.heads)},
              {"layers_within_classifier", intoSize(c.gat.layers)},
              {"learning_rate", into(c.gat.learning_rate)},
              {"dropout", into(c.gat.dropout)},
              {"adj_dropout", into(c.gat.adj_dropout)},
              {"leaky_slope", into(c.gat.leaky_slope)},
              {"attention_loss_weight", into(c.gat.attention_loss_weight)},
              {"lambda1", into(c.gat.lambda1)},
              {"lambda2", into(c.gat.weight_decay)},
              {"attention_weight", into(c.gat.beta)},
              {"feature_weight", into(c.gat.gamma)},
              {"epochs", intoSize(c.gat.epochs)},
              {"log_clamp", into(c.gat.log_clamp)},
              {"model_layers", intoSize(c.boost.stages)},
              {"cost", [&](const json& v) { parseCost(v, c.boost); }},
              {"label_coding",
               [&](const json& v) { c.boost.coding = parseLabelCoding(v.get<std::string>()); }},
              {"seed",
               [&](const json& v) {
                 seed = v.get<std::uint64_t>();
                 seed_given = true;
               }},
              {"output_dir", [&](const json& v) { c.output_dir = resolvePath(v.get<std::string>(), base_dir); }},
              {"sweep", [&](const json& v) { parseSweep(v, c.sweep); }}});
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (seed_given) applySeed(c, seed);
  c.validate();
  return c;
}

RunConfig loadRunConfig(const std::string& path) {
  const std::string base = fs::path(path).parent_path().string();
  return parseRunConfig(readFile(path), base);
}

RunConfig presetConfig(const std::string& name) {
  RunConfig c;
  if (name == "default") return c;
  if (name == "sichuan") {
    c.gat.hid = 128;
    c.gat.learning_rate = 0.002;
    c.gat.dropout = 0.0;
    c.gat.adj_dropout = 0.4;
    c.gat.attention_loss_weight = 0.5;
    c.gat.beta = 0.1;
    c.gat.gamma = 0.1;
    c.boost.stages = 2;
    c.boost.scheme = CostScheme::kLog1p;
    c.dataset.kind = "files";
    return c;
  }
  if (name == "bupt") {
    c.gat.hid = 64;
    c.gat.learning_rate = 0.01;
    c.gat.dropout = 0.2;
    c.gat.adj_dropout = 0.1;
    c.gat.attention_loss_weight = 0.01;
    c.gat.beta = 0.5;
    c.gat.gamma = 0.6;
    c.boost.stages = 2;
    c.boost.scheme = CostScheme::kLog1p;
    c.dataset.kind = "files";
    return c;
  }
  throw ConfigError("unknown preset '" + name + "' (expected default, sichuan or bupt)");
}

RunConfig resolveRunConfig(const std::string& name_or_path) {
  if (name_or_path == "default" || name_or_path == "sichuan" || name_or_path == "bupt") {
    return presetConfig(name_or_path);
  }
  return loadRunConfig(name_or_path);
}

void applyDatasetArgument(RunConfig& config, const std::string& name_or_path) {
  if (name_or_path == "synthetic") {
    config.dataset.kind = "synthetic";
    return;
  }
  fs::path dir(name_or_path);
  if (!fs::is_directory(dir)) {
    const char* root = std::getenv("GATCOBO_DATA_DIR");
    if (root == nullptr || !fs::is_directory(fs::path(root) / name_or_path)) {
      throw ConfigError("dataset '" + name_or_path +
                        "' is neither a directory nor found under $GATCOBO_DATA_DIR");
    }
    dir = fs::path(root) / name_or_path;
  }
  config.dataset.kind = "files";
  config.dataset.nodes_path = (dir / "nodes.csv").string();
  config.dataset.edges_path = (dir / "edges.csv").string();
  const fs::path splits = dir / "splits.json";
  config.dataset.splits_path = fs::exists(splits) ? splits.string() : std::string();
}

void applySeed(RunConfig& config, std::uint64_t seed) {
  config.seed = seed;
  config.split.seed = seed;
  config.dataset.synthetic.seed = seed;
}

Graph loadDataset(const RunConfig& config) {
  config.validate();
  Graph g;
  if (config.dataset.kind == "synthetic") {
    g = generateSynthetic(config.dataset.synthetic, config.dataset.load.self_loops);
    if (config.dataset.load.standardize) standardizeFeatures(g.features);
  } else {
    g = loadGraph(config.dataset.nodes_path, config.dataset.edges_path, config.dataset.load);
  }
  return g;
}

Graph assignSplits(Graph g, const RunConfig& config) {
  if (!config.dataset.splits_path.empty()) {
    return applySplitsFile(std::move(g), config.dataset.splits_path);
  }
  return stratifiedSplit(std::move(g), config.split);
}

Graph prepareGraph(const RunConfig& config) { return assignSplits(loadDataset(config), config); }

}  // namespace gatcobo
