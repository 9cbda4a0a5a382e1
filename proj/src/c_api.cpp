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

#include "gatcobo/gatcobo.h"

#include "gatcobo/checkpoint.hpp"
#include "gatcobo/config.hpp"
#include "gatcobo/errors.hpp"
#include "gatcobo/experiments.hpp"
#include "gatcobo/log.hpp"

#include <cstdlib>
#include <cstring>
#include <new>
#include <stdexcept>
#include <string>

struct gc_graph {
  gatcobo::Graph graph;
};

struct gc_model {
  gatcobo::EnsembleModel model;
};

namespace {

thread_local std::string g_last_error;

struct NullArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

gc_status fail(gc_status status, const char* message) {
  g_last_error = message;
  return status;
}

template <typename F>
gc_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return GC_OK;
  } catch (const NullArgument& e) {
    return fail(GC_ERR_ARGUMENT, e.what());
  } catch (const gatcobo::ConfigError& e) {
    return fail(GC_ERR_CONFIG, e.what());
  } catch (const gatcobo::DataError& e) {
    return fail(GC_ERR_DATA, e.what());
  } catch (const gatcobo::TrainingError& e) {
    return fail(GC_ERR_TRAINING, e.what());
  } catch (const gatcobo::DegenerateRowError& e) {
    return fail(GC_ERR_TRAINING, e.what());
  } catch (const gatcobo::DimensionError& e) {
    return fail(GC_ERR_DIMENSION, e.what());
  } catch (const gatcobo::DomainError& e) {
    return fail(GC_ERR_DOMAIN, e.what());
  } catch (const gatcobo::ContractError& e) {
    return fail(GC_ERR_CONTRACT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(GC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(GC_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(GC_ERR_INTERNAL, "unknown error");
  }
}

char* dupString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw NullArgument(std::string(what) + " must not be null");
}

gatcobo::RunConfig parseConfig(const char* config_json) {
  require(config_json, "config_json");
  return gatcobo::parseRunConfig(config_json);
}

gatcobo::SplitTag toTag(gc_split split) {
  switch (split) {
    case GC_SPLIT_TRAIN: return gatcobo::SplitTag::kTrain;
    case GC_SPLIT_VAL: return gatcobo::SplitTag::kVal;
    case GC_SPLIT_TEST: return gatcobo::SplitTag::kTest;
  }
  throw NullArgument("unknown split " + std::to_string(static_cast<int>(split)));
}

}  // namespace

extern "C" {

const char* gc_last_error(void) { return g_last_error.c_str(); }

const char* gc_status_name(gc_status status) {
  switch (status) {
    case GC_OK: return "ok";
    case GC_ERR_INTERNAL: return "internal error";
    case GC_ERR_CONFIG: return "config error";
    case GC_ERR_DATA: return "data error";
    case GC_ERR_TRAINING: return "training error";
    case GC_ERR_CONTRACT: return "contract error";
    case GC_ERR_DIMENSION: return "dimension error";
    case GC_ERR_DOMAIN: return "domain error";
    case GC_ERR_ARGUMENT: return "argument error";
  }
  return "unknown status";
}

const char* gc_version(void) { return "1.0.0"; }

void gc_string_free(char* s) { std::free(s); }

void gc_set_warning_callback(gc_warning_fn fn, void* user_data) {
  if (fn == nullptr) {
    gatcobo::setWarningSink(nullptr);
    return;
  }
  gatcobo::setWarningSink([fn, user_data](std::string_view msg) {
    const std::string text(msg);
    fn(text.c_str(), user_data);
  });
}

gc_status gc_config_resolve(const char* name_or_path, const char* dataset, int has_seed,
                            uint64_t seed, const char* output_dir, char** config_json) {
  return guarded([&] {
    require(config_json, "config_json");
    gatcobo::RunConfig c = gatcobo::resolveRunConfig(name_or_path ? name_or_path : "default");
    if (dataset != nullptr) gatcobo::applyDatasetArgument(c, dataset);
    if (has_seed) gatcobo::applySeed(c, seed);
    if (output_dir != nullptr) c.output_dir = output_dir;
    c.validate();
    *config_json = dupString(c.toJson().dump(2));
  });
}

gc_status gc_graph_prepare(const char* config_json, gc_graph** out) {
  return guarded([&] {
    require(out, "out");
    const gatcobo::RunConfig c = parseConfig(config_json);
    *out = new gc_graph{gatcobo::prepareGraph(c)};
  });
}

gc_status gc_graph_load(const char* nodes_path, const char* edges_path, int self_loops,
                        int standardize, gc_graph** out) {
  return guarded([&] {
    require(nodes_path, "nodes_path");
    require(edges_path, "edges_path");
    require(out, "out");
    gatcobo::LoadOptions opts;
    opts.self_loops = self_loops != 0;
    opts.standardize = standardize != 0;
    *out = new gc_graph{gatcobo::loadGraph(nodes_path, edges_path, opts)};
  });
}

gc_status gc_graph_generate(const char* config_json, gc_graph** out) {
  return guarded([&] {
    require(out, "out");
    gatcobo::RunConfig c = parseConfig(config_json);
    c.dataset.kind = "synthetic";
    *out = new gc_graph{gatcobo::loadDataset(c)};
  });
}

gc_status gc_graph_save(const gc_graph* g, const char* nodes_path, const char* edges_path) {
  return guarded([&] {
    require(g, "graph");
    require(nodes_path, "nodes_path");
    require(edges_path, "edges_path");
    gatcobo::saveGraph(g->graph, nodes_path, edges_path);
  });
}

gc_status gc_graph_split(gc_graph* g, double train_fraction, double val_fraction,
                         double test_fraction, uint64_t seed) {
  return guarded([&] {
    require(g, "graph");
    gatcobo::SplitSpec spec;
    spec.train_fraction = train_fraction;
    spec.val_fraction = val_fraction;
    spec.test_fraction = test_fraction;
    spec.seed = seed;
    g->graph = gatcobo::stratifiedSplit(std::move(g->graph), spec);
  });
}

gc_status gc_graph_subsample(const gc_graph* g, double target_ir, uint64_t seed, gc_graph** out) {
  return guarded([&] {
    require(g, "graph");
    require(out, "out");
    *out = new gc_graph{gatcobo::subsampleToIR(g->graph, target_ir, seed)};
  });
}

gc_status gc_graph_info(const gc_graph* g, char** info_json) {
  return guarded([&] {
    require(g, "graph");
    require(info_json, "info_json");
    const auto& gr = g->graph;
    nlohmann::json j{{"num_nodes", gr.numNodes()},
                     {"num_edges", gr.numEdges()},
                     {"num_features", gr.numFeatures()},
                     {"num_classes", gr.num_classes},
                     {"class_counts", gr.classCounts()},
                     {"train", gr.nodesIn(gatcobo::SplitTag::kTrain).size()},
                     {"val", gr.nodesIn(gatcobo::SplitTag::kVal).size()},
                     {"test", gr.nodesIn(gatcobo::SplitTag::kTest).size()}};
    const auto counts = gr.classCounts();
    bool all_present = !counts.empty();
    for (auto c : counts) all_present = all_present && c > 0;
    if (all_present) j["imbalance_ratio"] = gatcobo::imbalanceRatio(gr);
    *info_json = dupString(j.dump(2));
  });
}

size_t gc_graph_num_nodes(const gc_graph* g) { return g ? g->graph.numNodes() : 0; }

int gc_graph_num_classes(const gc_graph* g) { return g ? g->graph.num_classes : 0; }

void gc_graph_free(gc_graph* g) { delete g; }

gc_status gc_train(const char* config_json, const gc_graph* g, gc_model** model,
                   char** report_json) {
  return guarded([&] {
    require(g, "graph");
    require(model, "model");
    const gatcobo::RunConfig c = parseConfig(config_json);
    gatcobo::RunResult r = gatcobo::trainAndEvaluate(g->graph, c);
    if (report_json != nullptr) *report_json = dupString(gatcobo::trainReportJson(c, r));
    *model = new gc_model{std::move(r.model)};
  });
}

gc_status gc_model_save(const gc_model* m, const char* path) {
  return guarded([&] {
    require(m, "model");
    require(path, "path");
    gatcobo::saveModel(m->model, path);
  });
}

gc_status gc_model_load(const char* path, gc_model** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new gc_model{gatcobo::loadModel(path)};
  });
}

gc_status gc_model_info(const gc_model* m, char** info_json) {
  return guarded([&] {
    require(m, "model");
    require(info_json, "info_json");
    nlohmann::json z = nlohmann::json::array();
    for (const auto& s : m->model.stages) z.push_back(s.Z);
    nlohmann::json j{{"num_features", m->model.num_features},
                     {"num_classes", m->model.num_classes},
                     {"stages", m->model.numStages()},
                     {"Z", z},
                     {"label_coding", gatcobo::labelCodingName(m->model.coding)},
                     {"cost", nlohmann::json::parse(m->model.cost.toJson())},
                     {"config", gatcobo::gatConfigToJson(m->model.config)}};
    *info_json = dupString(j.dump(2));
  });
}

void gc_model_free(gc_model* m) { delete m; }

gc_status gc_predict(const gc_model* m, const gc_graph* g, int* labels, double* scores) {
  return guarded([&] {
    require(m, "model");
    require(g, "graph");
    const gatcobo::Prediction p = gatcobo::predict(m->model, g->graph);
    if (labels != nullptr) std::copy(p.labels.begin(), p.labels.end(), labels);
    if (scores != nullptr) {
      const auto& v = p.probabilities.values();
      std::copy(v.begin(), v.end(), scores);
    }
  });
}

gc_status gc_evaluate(const gc_model* m, const gc_graph* g, gc_split split, char** report_json) {
  return guarded([&] {
    require(m, "model");
    require(g, "graph");
    require(report_json, "report_json");
    const gatcobo::EvalReport r = gatcobo::evaluate(m->model, g->graph, toTag(split));
    *report_json = dupString(r.toJson().dump(2));
  });
}

gc_status gc_verify_bound(const gc_model* m, const gc_graph* g, char** report_json) {
  return guarded([&] {
    require(m, "model");
    require(g, "graph");
    require(report_json, "report_json");
    *report_json = dupString(gatcobo::verifyBound(m->model, g->graph).toJson());
  });
}

gc_status gc_ir_sweep(const char* config_json, char** csv) {
  return guarded([&] {
    require(csv, "csv");
    *csv = dupString(gatcobo::irSweep(parseConfig(config_json)).toCsv());
  });
}

gc_status gc_depth_sweep(const char* config_json, char** csv) {
  return guarded([&] {
    require(csv, "csv");
    *csv = dupString(gatcobo::depthSweep(parseConfig(config_json)).toCsv());
  });
}

gc_status gc_hp_sweep(const char* config_json, char** csv) {
  return guarded([&] {
    require(csv, "csv");
    *csv = dupString(gatcobo::hpSweep(parseConfig(config_json)).toCsv());
  });
}

gc_status gc_time_epochs(const char* config_json, char** csv, double* median_ms) {
  return guarded([&] {
    require(csv, "csv");
    const gatcobo::TimingResult t = gatcobo::timeEpochs(parseConfig(config_json));
    if (median_ms != nullptr) *median_ms = t.median_ms;
    *csv = dupString(t.toTable().toCsv());
  });
}

gc_status gc_verify_bound_random(const char* config_json, size_t count, uint64_t seed, char** csv,
                                 size_t* violations) {
  return guarded([&] {
    require(csv, "csv");
    const gatcobo::RunConfig c = parseConfig(config_json);
    const auto cases = gatcobo::randomizedBoundCheck(count, seed, c.gat);
    if (violations != nullptr) {
      *violations = 0;
      for (const auto& bc : cases) *violations += bc.report.holds ? 0 : 1;
    }
    *csv = dupString(gatcobo::boundTable(cases).toCsv());
  });
}

gc_status gc_make_run_dir(const char* base, const char* prefix, char** path) {
  return guarded([&] {
    require(base, "base");
    require(prefix, "prefix");
    require(path, "path");
    *path = dupString(gatcobo::makeRunDirectory(base, prefix));
  });
}

gc_status gc_write_file(const char* path, const char* text) {
  return guarded([&] {
    require(path, "path");
    require(text, "text");
    gatcobo::writeTextFile(path, text);
  });
}

}  // extern "C"
