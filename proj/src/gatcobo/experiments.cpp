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

#include "gatcobo/experiments.hpp"

#include "gatcobo/errors.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <numeric>

namespace gatcobo {
namespace {

namespace fs = std::filesystem;

std::vector<std::string> metricCells(const EvalReport& r) {
  return {formatNumber(r.g_mean), formatNumber(r.macro_auc), formatNumber(r.macro_recall),
          formatNumber(r.macro_f1)};
}

void append(std::vector<std::string>& row, const std::vector<std::string>& more) {
  row.insert(row.end(), more.begin(), more.end());
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

RunConfig seeded(const RunConfig& base, std::uint64_t seed) {
  RunConfig c = base;
  applySeed(c, seed);
  return c;
}

}  // namespace

std::string formatNumber(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void Table::addRow(std::vector<std::string> row) {
  if (row.size() != columns.size()) {
    throw ContractError("table row has " + std::to_string(row.size()) + " cells, expected " +
                        std::to_string(columns.size()));
  }
  rows.push_back(std::move(row));
}

std::string Table::toCsv() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(columns);
  for (const auto& r : rows) line(r);
  return out;
}

std::size_t Table::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw ContractError("no column named " + name);
  return static_cast<std::size_t>(it - columns.begin());
}

double Table::number(std::size_t row, const std::string& name) const {
  return std::stod(rows.at(row).at(column(name)));
}

RunResult trainAndEvaluate(const Graph& g, const RunConfig& config) {
  RunResult r;
  r.model = trainGatCobo(g, config.gat, config.boost, config.seed);
  r.prediction = predict(r.model, g);
  r.val = evaluatePrediction(r.prediction, g, SplitTag::kVal);
  r.test = evaluatePrediction(r.prediction, g, SplitTag::kTest);
  for (const auto& s : r.model.stages) {
    r.test.wall_time_per_epoch_ms.insert(r.test.wall_time_per_epoch_ms.end(), s.epoch_ms.begin(),
                                         s.epoch_ms.end());
  }
  r.val.wall_time_per_epoch_ms = r.test.wall_time_per_epoch_ms;
  return r;
}

std::string trainReportJson(const RunConfig& config, const RunResult& result) {
  nlohmann::json stages = nlohmann::json::array();
  for (const auto& s : result.model.stages) {
    stages.push_back({{"Z", s.Z},
                      {"final_loss", s.epoch_loss.empty() ? 0.0 : s.epoch_loss.back()}});
  }
  const nlohmann::json doc{{"config", config.toJson()},
                           {"cost_matrix", nlohmann::json::parse(result.model.cost.toJson())},
                           {"stages", stages},
                           {"val", result.val.toJson()},
                           {"test", result.test.toJson()}};
  return doc.dump(2);
}

Table irSweep(const RunConfig& config) {
  Table t;
  t.columns = {"ir", "achieved_ir", "seed", "scheme", "g_mean", "macro_auc", "macro_recall",
               "macro_f1"};
  for (std::uint64_t seed : config.sweep.seeds) {
    const RunConfig c = seeded(config, seed);
    Graph raw = loadDataset(c);
    const bool explicit_split = !c.dataset.splits_path.empty();
    if (explicit_split) raw = assignSplits(std::move(raw), c);
    for (double ir : config.sweep.ir_list) {
      Graph g = subsampleToIR(raw, ir, seed);
      if (!explicit_split) g = assignSplits(std::move(g), c);
      const RunResult r = trainAndEvaluate(g, c);
      std::vector<std::string> row{formatNumber(ir), formatNumber(imbalanceRatio(g)),
                                   std::to_string(seed), costSchemeName(c.boost.scheme)};
      append(row, metricCells(r.test));
      t.addRow(std::move(row));
    }
  }
  return t;
}

Table depthSweep(const RunConfig& config) {
  Table t;
  t.columns = {"layers", "seed", "g_mean", "macro_auc", "macro_recall", "macro_f1"};
  if (config.sweep.ablation) {
    append(t.columns, {"stacked_g_mean", "stacked_macro_auc", "stacked_macro_recall"});
  }
  for (std::uint64_t seed : config.sweep.seeds) {
    RunConfig c = seeded(config, seed);
    const Graph g = prepareGraph(c);
    for (std::size_t layers : config.sweep.layer_list) {
      c.boost.stages = layers;
      const RunResult r = trainAndEvaluate(g, c);
      std::vector<std::string> row{std::to_string(layers), std::to_string(seed)};
      append(row, metricCells(r.test));
      if (config.sweep.ablation) {
        const StackedGat s = trainStackedGat(g, c.gat, layers, seed);
        const EvalReport sr = evaluatePrediction(predictStacked(s, g), g, SplitTag::kTest);
        append(row, {formatNumber(sr.g_mean), formatNumber(sr.macro_auc),
                     formatNumber(sr.macro_recall)});
      }
      t.addRow(std::move(row));
    }
  }
  return t;
}

Table hpSweep(const RunConfig& config) {
  Table t;
  t.columns = {"train_fraction", "hid", "learning_rate", "seed", "g_mean", "macro_auc",
               "macro_recall", "macro_f1"};
  for (double tf : config.sweep.train_fractions) {
    for (std::size_t hid : config.sweep.hids) {
      for (double lr : config.sweep.learning_rates) {
        for (std::uint64_t seed : config.sweep.seeds) {
          RunConfig c = seeded(config, seed);
          // The remainder keeps the original val:test proportion.
          const double rest = c.split.val_fraction + c.split.test_fraction;
          c.split.val_fraction = (1.0 - tf) * c.split.val_fraction / rest;
          c.split.test_fraction = 1.0 - tf - c.split.val_fraction;
          c.split.train_fraction = tf;
          c.gat.hid = hid;
          c.gat.learning_rate = lr;
          const Graph g = prepareGraph(c);
          const RunResult r = trainAndEvaluate(g, c);
          std::vector<std::string> row{formatNumber(tf), std::to_string(hid), formatNumber(lr),
                                       std::to_string(seed)};
          append(row, metricCells(r.test));
          t.addRow(std::move(row));
        }
      }
    }
  }
  return t;
}

Table TimingResult::toTable() const {
  Table t;
  t.columns = {"run", "epochs", "mean_epoch_ms", "median_epoch_ms"};
  for (std::size_t i = 0; i < epoch_ms.size(); ++i) {
    t.addRow({std::to_string(i), std::to_string(epoch_ms[i].size()), formatNumber(run_mean_ms[i]),
              formatNumber(median(epoch_ms[i]))});
  }
  return t;
}

TimingResult timeEpochs(const RunConfig& config) {
  const Graph g = prepareGraph(config);
  TimingResult out;
  for (std::size_t run = 0; run < config.sweep.timing_runs; ++run) {
    const EnsembleModel m = trainGatCobo(g, config.gat, config.boost, config.seed + run);
    std::vector<double> ms;
    for (const auto& s : m.stages) ms.insert(ms.end(), s.epoch_ms.begin(), s.epoch_ms.end());
    const double mean =
        ms.empty() ? 0.0 : std::accumulate(ms.begin(), ms.end(), 0.0) / static_cast<double>(ms.size());
    out.run_mean_ms.push_back(mean);
    out.epoch_ms.push_back(std::move(ms));
  }
  out.median_ms = median(out.run_mean_ms);
  return out;
}

std::vector<BoundCase> randomizedBoundCheck(std::size_t count, std::uint64_t seed,
                                            const GatConfig& base) {
  static constexpr CostScheme kSchemes[] = {CostScheme::kUniform, CostScheme::kInverse,
                                            CostScheme::kLog1p};
  std::vector<BoundCase> cases;
  for (std::size_t i = 0; i < count; ++i) {
    BoundCase bc;
    bc.num_classes = 2 + static_cast<int>(i % 2);
    bc.stages = 1 + (i / 2) % 3;
    bc.scheme = kSchemes[(i / 6) % 3];
    bc.seed = stageSeed(seed, i);

    SyntheticSpec spec;
    spec.nodes_per_class.assign(static_cast<std::size_t>(bc.num_classes), 0);
    for (std::size_t k = 0; k < spec.nodes_per_class.size(); ++k) {
      spec.nodes_per_class[k] = 8 + 14 / (k + 1) + (bc.seed >> (4 * k)) % 6;
    }
    spec.feature_dim = 4;
    spec.intra_class_edge_prob = 0.2;
    spec.inter_class_edge_prob = 0.05;
    spec.class_mean_separation = 1.5;
    spec.seed = bc.seed;
    Graph g = generateSynthetic(spec);
    standardizeFeatures(g.features);
    SplitSpec split;
    split.train_fraction = 0.5;
    split.val_fraction = 0.2;
    split.test_fraction = 0.3;
    split.seed = bc.seed;
    g = stratifiedSplit(std::move(g), split);

    BoostConfig boost;
    boost.stages = bc.stages;
    boost.scheme = bc.scheme;
    const EnsembleModel m = trainGatCobo(g, base, boost, bc.seed);
    bc.report = verifyBound(m, g);
    cases.push_back(std::move(bc));
  }
  return cases;
}

Table boundTable(const std::vector<BoundCase>& cases) {
  Table t;
  t.columns = {"case", "K", "L", "scheme", "seed", "n", "misclassified", "excluded", "lhs", "rhs",
               "holds"};
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    t.addRow({std::to_string(i), std::to_string(c.num_classes), std::to_string(c.stages),
              costSchemeName(c.scheme), std::to_string(c.seed), std::to_string(c.report.n),
              std::to_string(c.report.misclassified), std::to_string(c.report.excluded),
              formatNumber(c.report.lhs), formatNumber(c.report.rhs),
              c.report.holds ? "true" : "false"});
  }
  return t;
}

std::string makeRunDirectory(const std::string& base, const std::string& prefix) {
  fs::create_directories(base);
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y%m%d-%H%M%S", &tm);
  const fs::path root = fs::path(base) / (prefix + "-" + stamp);
  for (int i = 0;; ++i) {
    const fs::path candidate = i == 0 ? root : fs::path(root.string() + "-" + std::to_string(i));
    if (fs::create_directory(candidate)) return candidate.string();
  }
}

void writeTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << text;
  if (!out) throw DataError("failed writing " + path);
}

}  // namespace gatcobo
