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

#include "gatcobo/csr.hpp"
#include "gatcobo/errors.hpp"
#include "gatcobo/graph.hpp"
#include "gatcobo/log.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <map>
#include <set>

namespace gatcobo {
namespace {

using testing::TempDir;

std::string nodesCsv(const std::vector<std::pair<int, std::vector<double>>>& rows) {
  std::string s = "id,label";
  for (std::size_t j = 0; j < rows.front().second.size(); ++j) s += ",f" + std::to_string(j);
  s += "\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    s += std::to_string(i) + "," + std::to_string(rows[i].first);
    for (double v : rows[i].second) s += "," + std::to_string(v);
    s += "\n";
  }
  return s;
}

LoadOptions raw() {
  LoadOptions o;
  o.self_loops = false;
  o.standardize = false;
  return o;
}

TEST(LoadGraph, TwoNodesOneEdge) {
  TempDir dir;
  const auto n = dir.write("nodes.csv", "id,label,f0\n0,0,1.5\n1,1,-2\n");
  const auto e = dir.write("edges.csv", "src,dst\n0,1\n");
  const Graph g = loadGraph(n, e, raw());
  EXPECT_EQ(g.numNodes(), 2u);
  EXPECT_EQ(g.adjacency->degree(0), 1u);
  EXPECT_EQ(g.adjacency->degree(1), 1u);
  EXPECT_EQ(g.num_classes, 2);
  EXPECT_DOUBLE_EQ(g.features(1, 0), -2.0);
}

TEST(LoadGraph, BothDirectionsStoredOnce) {
  TempDir dir;
  const auto n = dir.write("nodes.csv", "id,label,f0\n0,0,1\n1,1,2\n2,0,3\n");
  const auto e = dir.write("edges.csv", "src,dst\n0,1\n1,0\n0,1\n2,1\n");
  const Graph g = loadGraph(n, e, raw());
  EXPECT_EQ(g.adjacency->numEntries(), 4u);
  EXPECT_EQ(g.numEdges(), 2u);
  EXPECT_EQ(g.adjacency->degree(1), 2u);
}

TEST(LoadGraph, SelfLoopsAddOnePerNode) {
  TempDir dir;
  const auto n = dir.write("nodes.csv", "id,label,f0\n0,0,1\n1,1,2\n2,0,3\n");
  const auto e = dir.write("edges.csv", "src,dst\n0,1\n1,1\n");
  LoadOptions o = raw();
  o.self_loops = true;
  const Graph g = loadGraph(n, e, o);
  EXPECT_EQ(g.adjacency->numEntries(), 2u + 3u);
  for (NodeId v = 0; v < 3; ++v) EXPECT_TRUE(g.adjacency->hasEntry(v, v));
}

TEST(LoadGraph, RowOrderIsFree) {
  TempDir dir;
  const auto n = dir.write("nodes.csv", "id,label,f0\n2,0,3\n0,0,1\n1,1,2\n");
  const auto e = dir.write("edges.csv", "src,dst\n0,1\n");
  const Graph g = loadGraph(n, e, raw());
  EXPECT_DOUBLE_EQ(g.features(2, 0), 3.0);
  EXPECT_EQ(g.labels[1], 1);
}

TEST(LoadGraph, DanglingEndpointReportsRow) {
  TempDir dir;
  const auto n = dir.write("nodes.csv", "id,label,f0\n0,0,1\n1,1,2\n");
  const auto e = dir.write("edges.csv", "src,dst\n0,1\n1,7\n");
  try {
    loadGraph(n, e, raw());
    FAIL();
  } catch (const DataError& err) {
    EXPECT_NE(std::string(err.what()).find("3"), std::string::npos) << err.what();
  }
}

TEST(LoadGraph, NonNumericFeatureIsParseError) {
  TempDir dir;
  const auto n = dir.write("nodes.csv", "id,label,f0\n0,0,abc\n");
  const auto e = dir.write("edges.csv", "src,dst\n");
  EXPECT_THROW(loadGraph(n, e, raw()), DataError);
}

TEST(LoadGraph, DuplicateNodeIdRejected) {
  TempDir dir;
  const auto n = dir.write("nodes.csv", "id,label,f0\n0,0,1\n0,1,2\n");
  const auto e = dir.write("edges.csv", "src,dst\n");
  EXPECT_THROW(loadGraph(n, e, raw()), DataError);
}

TEST(LoadGraph, BadHeaderAndMissingFileRejected) {
  TempDir dir;
  const auto n = dir.write("nodes.csv", "node,label,f0\n0,0,1\n");
  const auto e = dir.write("edges.csv", "src,dst\n");
  EXPECT_THROW(loadGraph(n, e, raw()), DataError);
  EXPECT_THROW(loadGraph(dir.file("missing.csv"), e, raw()), DataError);
}

TEST(LoadGraph, UnlabeledNodesAreKeptOutOfSplits) {
  TempDir dir;
  std::string nodes = "id,label,f0\n";
  for (int i = 0; i < 20; ++i) {
    nodes += std::to_string(i) + "," + (i % 5 == 0 ? "-1" : std::to_string(i % 2)) + "," +
             std::to_string(i) + "\n";
  }
  const Graph g0 = loadGraph(dir.write("n.csv", nodes), dir.write("e.csv", "src,dst\n"), raw());
  const Graph g = stratifiedSplit(g0, {});
  for (std::size_t v = 0; v < g.numNodes(); ++v) {
    if (g.labels[v] < 0) {
      EXPECT_EQ(g.split[v], SplitTag::kNone);
    } else {
      EXPECT_NE(g.split[v], SplitTag::kNone);
    }
  }
}

TEST(LoadGraph, SaveLoadRoundTrip) {
  TempDir dir;
  const Graph g = testing::smallGraph({12, 5}, 4);
  saveGraph(g, dir.file("n.csv"), dir.file("e.csv"));
  const Graph h = loadGraph(dir.file("n.csv"), dir.file("e.csv"), raw());
  EXPECT_EQ(h.features, g.features);
  EXPECT_EQ(h.labels, g.labels);
  EXPECT_EQ(h.numEdges(), g.numEdges());
}

TEST(LoadGraph, ThenImbalanceRatioIsPure) {
  TempDir dir;
  const Graph g = testing::smallGraph({12, 5}, 4);
  saveGraph(g, dir.file("n.csv"), dir.file("e.csv"));
  const double a = imbalanceRatio(loadGraph(dir.file("n.csv"), dir.file("e.csv")));
  const double b = imbalanceRatio(loadGraph(dir.file("n.csv"), dir.file("e.csv")));
  EXPECT_EQ(a, b);
  EXPECT_DOUBLE_EQ(a, 5.0 / 12.0);
}

TEST(ImbalanceRatio, SichuanCounts) {
  const std::vector<std::size_t> counts{1962, 4144};
  EXPECT_NEAR(imbalanceRatio(counts), 0.4735, 5e-5);
}

TEST(ImbalanceRatio, BuptCounts) {
  const std::vector<std::size_t> counts{99861, 8074, 10000};
  EXPECT_NEAR(imbalanceRatio(counts), 0.0809, 5e-5);
}

TEST(ImbalanceRatio, EqualSizesGiveOne) {
  const std::vector<std::size_t> counts{7, 7, 7};
  EXPECT_EQ(imbalanceRatio(counts), 1.0);
}

TEST(ImbalanceRatio, EmptyClassIsContractError) {
  const std::vector<std::size_t> counts{5, 0};
  EXPECT_THROW(imbalanceRatio(counts), ContractError);
}

TEST(StratifiedSplit, TenNodesGiveOnePerClassInTrain) {
  SyntheticSpec spec;
  spec.nodes_per_class = {5, 5};
  spec.feature_dim = 2;
  const Graph g = stratifiedSplit(generateSynthetic(spec), {});
  const auto train = g.classCounts(SplitTag::kTrain);
  EXPECT_EQ(train, (std::vector<std::size_t>{1, 1}));
}

TEST(StratifiedSplit, SameSeedSameMasks) {
  SyntheticSpec spec;
  spec.nodes_per_class = {40, 13, 9};
  spec.feature_dim = 3;
  const Graph g = generateSynthetic(spec);
  SplitSpec s;
  s.seed = 17;
  EXPECT_EQ(stratifiedSplit(g, s).split, stratifiedSplit(g, s).split);
  SplitSpec other = s;
  other.seed = 18;
  EXPECT_NE(stratifiedSplit(g, s).split, stratifiedSplit(g, other).split);
}

TEST(StratifiedSplit, SichuanScaleTrainCount) {
  // Counts only; features and edges are irrelevant here.
  std::vector<int> labels(1962, 1);
  labels.resize(1962 + 4144, 0);
  const Graph g = stratifiedSplit(buildGraph(Matrix(labels.size(), 1), labels, {}, {}), {});
  const auto train = g.classCounts(SplitTag::kTrain);
  EXPECT_NEAR(static_cast<double>(train[1]), 392.0, 1.0);
  EXPECT_NEAR(static_cast<double>(train[0]), std::round(0.2 * 4144), 1.0);
}

TEST(StratifiedSplit, ProportionsWithinOneNodePerClass) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_int_distribution<std::size_t> size(3, 60);
    SyntheticSpec spec;
    spec.nodes_per_class = {size(rng), size(rng), size(rng)};
    spec.feature_dim = 3;
    spec.intra_class_edge_prob = 0.0;
    spec.inter_class_edge_prob = 0.0;
    SplitSpec s;
    s.train_fraction = 0.3;
    s.val_fraction = 0.3;
    s.test_fraction = 0.4;
    s.seed = rng();
    const Graph g = stratifiedSplit(generateSynthetic(spec), s);
    const double fr[] = {0.3, 0.3, 0.4};
    const SplitTag tags[] = {SplitTag::kTrain, SplitTag::kVal, SplitTag::kTest};
    for (int t = 0; t < 3; ++t) {
      const auto counts = g.classCounts(tags[t]);
      for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_LE(std::abs(static_cast<double>(counts[k]) -
                           fr[t] * static_cast<double>(spec.nodes_per_class[k])),
                  1.0 + 1e-9);
      }
    }
    g.validate();
  }
}

TEST(StratifiedSplit, TinyClassWarnsButAssigns) {
  std::vector<std::string> warnings;
  setWarningSink([&](std::string_view m) { warnings.emplace_back(m); });
  SyntheticSpec spec;
  spec.nodes_per_class = {30, 2};
  spec.feature_dim = 2;
  const Graph g = stratifiedSplit(generateSynthetic(spec), {});
  setWarningSink(nullptr);
  EXPECT_FALSE(warnings.empty());
  g.validate();
}

TEST(StratifiedSplit, InvalidFractionsRejected) {
  SplitSpec s;
  s.train_fraction = 0.5;
  EXPECT_THROW(s.validate(), Error);
  s.train_fraction = -0.2;
  s.val_fraction = 0.6;
  s.test_fraction = 0.6;
  EXPECT_THROW(s.validate(), Error);
}

TEST(ApplySplits, ExplicitListsAndOverlapRejected) {
  const Graph g = generateSynthetic({});
  const Graph s = applySplits(g, R"({"train":[0,1],"val":[2],"test":[3,4]})");
  EXPECT_EQ(s.split[0], SplitTag::kTrain);
  EXPECT_EQ(s.split[2], SplitTag::kVal);
  EXPECT_EQ(s.split[4], SplitTag::kTest);
  EXPECT_EQ(s.split[5], SplitTag::kNone);
  EXPECT_THROW(applySplits(g, R"({"train":[0,1],"val":[1],"test":[]})"), DataError);
  EXPECT_THROW(applySplits(g, R"({"train":[100000]})"), DataError);
}

TEST(SubsampleToIR, CurrentRatioKeepsCounts) {
  SyntheticSpec spec;
  spec.nodes_per_class = {80, 20};
  const Graph g = generateSynthetic(spec);
  const Graph s = subsampleToIR(g, 0.25, 1);
  EXPECT_EQ(s.classCounts(), g.classCounts());
}

TEST(SubsampleToIR, BalancedToHalfIsUnreachable) {
  SyntheticSpec spec;
  spec.nodes_per_class = {100, 100};
  EXPECT_THROW(subsampleToIR(generateSynthetic(spec), 0.5, 1), ContractError);
}

TEST(SubsampleToIR, MajorityDownsampledToMinorityOverTarget) {
  SyntheticSpec spec;
  spec.nodes_per_class = {1000, 50};
  spec.intra_class_edge_prob = 0.01;
  spec.inter_class_edge_prob = 0.002;
  const Graph g = generateSynthetic(spec);
  const Graph s = subsampleToIR(g, 0.5, 3);
  EXPECT_EQ(s.classCounts(), (std::vector<std::size_t>{100, 50}));
  EXPECT_NEAR(imbalanceRatio(s), 0.5, 0.01);
}

TEST(SubsampleToIR, OutOfRangeTargetRejected) {
  const Graph g = generateSynthetic({});
  EXPECT_THROW(subsampleToIR(g, 0.0, 1), ContractError);
  EXPECT_THROW(subsampleToIR(g, 1.5, 1), ContractError);
}

// Induced-subgraph oracle: map retained nodes back by feature row.
TEST(SubsampleToIR, PreservesInducedEdgesAndMinority) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    SyntheticSpec spec;
    spec.nodes_per_class = {60, 9, 15};
    spec.feature_dim = 3;
    spec.intra_class_edge_prob = 0.2;
    spec.inter_class_edge_prob = 0.05;
    spec.seed = rng();
    const Graph g = generateSynthetic(spec);
    std::uniform_real_distribution<double> ir(0.15, 1.0);
    const Graph s = subsampleToIR(g, ir(rng), rng());
    EXPECT_EQ(s.classCounts()[1], 9u);
    std::map<std::vector<double>, NodeId> origin;
    for (NodeId v = 0; v < g.numNodes(); ++v) {
      const auto r = g.features.row(v);
      origin[{r.begin(), r.end()}] = v;
    }
    std::vector<NodeId> back(s.numNodes());
    for (NodeId v = 0; v < s.numNodes(); ++v) {
      const auto r = s.features.row(v);
      back[v] = origin.at({r.begin(), r.end()});
      EXPECT_EQ(s.labels[v], g.labels[back[v]]);
    }
    for (NodeId u = 0; u < s.numNodes(); ++u) {
      for (NodeId v = 0; v < s.numNodes(); ++v) {
        EXPECT_EQ(s.adjacency->hasEntry(u, v), g.adjacency->hasEntry(back[u], back[v]));
      }
    }
  }
}

TEST(GenerateSynthetic, NoInterClassEdgesWhenProbabilityZero) {
  SyntheticSpec spec;
  spec.nodes_per_class = {30, 20};
  spec.intra_class_edge_prob = 0.3;
  spec.inter_class_edge_prob = 0.0;
  const Graph g = generateSynthetic(spec);
  const Csr& a = *g.adjacency;
  for (std::size_t k = 0; k < a.numEntries(); ++k) {
    EXPECT_EQ(g.labels[a.sources[k]], g.labels[a.targets[k]]);
  }
  EXPECT_GT(g.numEdges(), 0u);
}

TEST(GenerateSynthetic, ExactClassCounts) {
  SyntheticSpec spec;
  spec.nodes_per_class = {10, 90};
  const Graph g = generateSynthetic(spec);
  EXPECT_EQ(imbalanceRatio(g), 10.0 / 90.0);
}

// Nearest-centroid oracle on the raw generated features.
TEST(GenerateSynthetic, WellSeparatedClassesAreNearestMeanSeparable) {
  SyntheticSpec spec;
  spec.nodes_per_class = {200, 150, 100};
  spec.feature_dim = 6;
  spec.class_mean_separation = 10.0;
  spec.feature_noise_std = 0.1;
  spec.seed = 3;
  const Graph g = generateSynthetic(spec);
  const std::size_t k = 3, d = 6;
  Matrix centroid(k, d);
  std::vector<double> count(k, 0.0);
  for (std::size_t v = 0; v < g.numNodes(); ++v) {
    const auto c = static_cast<std::size_t>(g.labels[v]);
    for (std::size_t j = 0; j < d; ++j) centroid(c, j) += g.features(v, j);
    count[c] += 1.0;
  }
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t j = 0; j < d; ++j) centroid(c, j) /= count[c];
  std::size_t correct = 0;
  for (std::size_t v = 0; v < g.numNodes(); ++v) {
    std::size_t best = 0;
    double best_d = 1e300;
    for (std::size_t c = 0; c < k; ++c) {
      double dist = 0.0;
      for (std::size_t j = 0; j < d; ++j) dist += std::pow(g.features(v, j) - centroid(c, j), 2);
      if (dist < best_d) best_d = dist, best = c;
    }
    correct += static_cast<int>(best) == g.labels[v];
  }
  EXPECT_GE(static_cast<double>(correct) / static_cast<double>(g.numNodes()), 0.99);
}

TEST(GenerateSynthetic, InvalidSpecRejected) {
  SyntheticSpec spec;
  spec.intra_class_edge_prob = 1.5;
  EXPECT_THROW(spec.validate(), Error);
  spec = {};
  spec.nodes_per_class = {5, 0};
  EXPECT_THROW(spec.validate(), Error);
}

// Structural invariants over random graphs.
TEST(GraphInvariants, SymmetricCsrWithExpectedOffsets) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 25; ++trial) {
    SyntheticSpec spec;
    std::uniform_int_distribution<std::size_t> size(1, 25);
    spec.nodes_per_class = {size(rng), size(rng)};
    spec.feature_dim = 2;
    spec.intra_class_edge_prob = 0.3;
    spec.inter_class_edge_prob = 0.1;
    spec.seed = rng();
    const bool loops = trial % 2 == 0;
    const Graph g = generateSynthetic(spec, loops);
    const Csr& a = *g.adjacency;
    for (std::size_t i = 1; i < a.offsets.size(); ++i) EXPECT_LE(a.offsets[i - 1], a.offsets[i]);
    EXPECT_EQ(a.offsets.back(), 2 * g.numEdges() + (loops ? g.numNodes() : 0));
    std::set<std::pair<NodeId, NodeId>> seen;
    for (std::size_t k = 0; k < a.numEntries(); ++k) {
      EXPECT_TRUE(a.hasEntry(a.targets[k], a.sources[k]));
      EXPECT_TRUE(seen.insert({a.sources[k], a.targets[k]}).second);
    }
    g.validate();
  }
}

}  // namespace
}  // namespace gatcobo
