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

#include "gatcobo/csr.hpp"
#include "gatcobo/matrix.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace gatcobo {

enum class SplitTag : std::uint8_t { kNone = 0, kTrain, kVal, kTest };

const char* splitName(SplitTag tag);
SplitTag parseSplitName(const std::string& name);

// Undirected attributed graph with integer labels. Nodes carry one split tag
// each, so the train/val/test masks are disjoint by construction. Label -1
// marks an unlabeled node, which never receives a tag.
struct Graph {
  std::shared_ptr<const Csr> adjacency = std::make_shared<Csr>();
  Matrix features;
  std::vector<int> labels;
  int num_classes = 0;
  std::vector<SplitTag> split;
  bool self_loops = true;

  std::size_t numNodes() const { return labels.size(); }
  std::size_t numFeatures() const { return features.cols(); }
  // Undirected edges between distinct nodes.
  std::size_t numEdges() const;

  std::vector<std::size_t> nodesIn(SplitTag tag) const;
  // Labeled-node count per class, optionally restricted to one split.
  std::vector<std::size_t> classCounts() const;
  std::vector<std::size_t> classCounts(SplitTag tag) const;

  // Throws DataError when any structural invariant is broken.
  void validate() const;
};

struct LoadOptions {
  bool self_loops = true;
  bool standardize = true;
  // 0 infers K as max label + 1; otherwise labels are checked against it.
  int num_classes = 0;
};

// Builds and validates a graph from in-memory parts. Labels must be -1 or in
// [0, K).
Graph buildGraph(Matrix features, std::vector<int> labels,
                 const std::vector<std::pair<NodeId, NodeId>>& edges, const LoadOptions& options);

// nodes.csv: `id,label,f0,...`; edges.csv: `src,dst`. Row order is free; ids
// must be exactly 0..N-1.
Graph loadGraph(const std::string& nodes_path, const std::string& edges_path,
                const LoadOptions& options = {});
void saveGraph(const Graph& g, const std::string& nodes_path, const std::string& edges_path);

// Per-column z-score; constant columns are only centered.
void standardizeFeatures(Matrix& features);

double imbalanceRatio(std::span<const std::size_t> class_counts);
double imbalanceRatio(const Graph& g);

struct SplitSpec {
  double train_fraction = 0.2;
  double val_fraction = 0.2;
  double test_fraction = 0.6;
  std::uint64_t seed = 0;
  bool stratified = true;

  void validate() const;
};

Graph stratifiedSplit(Graph g, const SplitSpec& spec);

// Explicit node lists: {"train": [...], "val": [...], "test": [...]}.
Graph applySplits(Graph g, const std::string& splits_json_text);
Graph applySplitsFile(Graph g, const std::string& path);

// Keeps every node of the smallest class and downsamples each larger class to
// at most round(min_count / target_ir) nodes. Unlabeled nodes are kept. The
// result is the induced subgraph with ids compacted in original order.
Graph subsampleToIR(const Graph& g, double target_ir, std::uint64_t seed);

struct SyntheticSpec {
  std::vector<std::size_t> nodes_per_class{90, 10};
  double intra_class_edge_prob = 0.05;
  double inter_class_edge_prob = 0.01;
  std::size_t feature_dim = 8;
  double class_mean_separation = 2.0;
  double feature_noise_std = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

// Stochastic block model with one block per class. Class c's feature mean is
// (separation / sqrt 2) along axis c, so any two class means lie exactly
// `class_mean_separation` apart. Features are not standardized.
Graph generateSynthetic(const SyntheticSpec& spec, bool self_loops = true);

}  // namespace gatcobo
