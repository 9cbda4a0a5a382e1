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

#include "gatcobo/graph.hpp"

#include "gatcobo/errors.hpp"
#include "gatcobo/log.hpp"

#include "json.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string_view>

namespace gatcobo {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> splitCsv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string where(const std::string& path, std::size_t row) {
  return path + ":" + std::to_string(row);
}

long long parseInt(std::string_view s, const std::string& path, std::size_t row) {
  long long v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw DataError(where(path, row) + ": expected an integer, got '" + std::string(s) + "'");
  }
  return v;
}

double parseReal(std::string_view s, const std::string& path, std::size_t row) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v)) {
    throw DataError(where(path, row) + ": expected a finite number, got '" + std::string(s) + "'");
  }
  return v;
}

std::ifstream openInput(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return in;
}

std::string formatReal(double v) {
  char buf[32];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

}  // namespace

const char* splitName(SplitTag tag) {
  switch (tag) {
    case SplitTag::kTrain: return "train";
    case SplitTag::kVal: return "val";
    case SplitTag::kTest: return "test";
    case SplitTag::kNone: break;
  }
  return "none";
}

SplitTag parseSplitName(const std::string& name) {
  if (name == "train") return SplitTag::kTrain;
  if (name == "val") return SplitTag::kVal;
  if (name == "test") return SplitTag::kTest;
  throw ConfigError("unknown split '" + name + "' (expected train, val or test)");
}

std::size_t Graph::numEdges() const {
  std::size_t loops = 0;
  const Csr& a = *adjacency;
  for (std::size_t k = 0; k < a.numEntries(); ++k) loops += a.sources[k] == a.targets[k];
  return (a.numEntries() - loops) / 2;
}

std::vector<std::size_t> Graph::nodesIn(SplitTag tag) const {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < split.size(); ++v)
    if (split[v] == tag) out.push_back(v);
  return out;
}

std::vector<std::size_t> Graph::classCounts() const {
  std::vector<std::size_t> counts(static_cast<std::size_t>(num_classes), 0);
  for (int y : labels)
    if (y >= 0) ++counts[static_cast<std::size_t>(y)];
  return counts;
}

std::vector<std::size_t> Graph::classCounts(SplitTag tag) const {
  std::vector<std::size_t> counts(static_cast<std::size_t>(num_classes), 0);
  for (std::size_t v = 0; v < labels.size(); ++v)
    if (labels[v] >= 0 && split[v] == tag) ++counts[static_cast<std::size_t>(labels[v])];
  return counts;
}

void Graph::validate() const {
  const std::size_t n = numNodes();
  if (features.rows() != n) {
    throw DataError("feature matrix has " + std::to_string(features.rows()) + " rows for " +
                    std::to_string(n) + " nodes");
  }
  if (split.size() != n) throw DataError("split tags do not cover every node");
  if (adjacency->numNodes() != n) throw DataError("adjacency size does not match node count");
  if (num_classes < 1) throw DataError("graph has no classes");
  for (std::size_t v = 0; v < n; ++v) {
    if (labels[v] < -1 || labels[v] >= num_classes) {
      throw DataError("node " + std::to_string(v) + " has label " + std::to_string(labels[v]) +
                      " outside [0, " + std::to_string(num_classes) + ")");
    }
    if (labels[v] == -1 && split[v] != SplitTag::kNone) {
      throw DataError("unlabeled node " + std::to_string(v) + " is assigned to a split");
    }
  }
  const Csr& a = *adjacency;
  for (std::size_t k = 0; k < a.numEntries(); ++k) {
    if (!a.hasEntry(a.targets[k], a.sources[k])) {
      throw DataError("adjacency is not symmetric at (" + std::to_string(a.sources[k]) + ", " +
                      std::to_string(a.targets[k]) + ")");
    }
  }
}

void standardizeFeatures(Matrix& x) {
  if (x.rows() == 0) return;
  const double n = static_cast<double>(x.rows());
  for (std::size_t c = 0; c < x.cols(); ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < x.rows(); ++r) mean += x(r, c);
    mean /= n;
    double var = 0.0;
    for (std::size_t r = 0; r < x.rows(); ++r) var += (x(r, c) - mean) * (x(r, c) - mean);
    const double sd = std::sqrt(var / n);
    const double inv = sd > 1e-12 ? 1.0 / sd : 1.0;
    for (std::size_t r = 0; r < x.rows(); ++r) x(r, c) = (x(r, c) - mean) * inv;
  }
}

Graph buildGraph(Matrix features, std::vector<int> labels,
                 const std::vector<std::pair<NodeId, NodeId>>& edges, const LoadOptions& options) {
  Graph g;
  const std::size_t n = labels.size();
  if (features.rows() != n) {
    throw DataError("feature rows (" + std::to_string(features.rows()) +
                    ") differ from label count (" + std::to_string(n) + ")");
  }
  int max_label = -1;
  for (int y : labels) {
    if (y < -1) throw DataError("label " + std::to_string(y) + " is negative");
    max_label = std::max(max_label, y);
  }
  g.num_classes = options.num_classes > 0 ? options.num_classes : max_label + 1;
  if (max_label >= g.num_classes) {
    throw DataError("label " + std::to_string(max_label) + " exceeds the declared " +
                    std::to_string(g.num_classes) + " classes");
  }
  if (options.standardize) standardizeFeatures(features);
  g.features = std::move(features);
  g.labels = std::move(labels);
  g.split.assign(n, SplitTag::kNone);
  g.self_loops = options.self_loops;
  g.adjacency = std::make_shared<Csr>(Csr::fromUndirectedEdges(n, edges, options.self_loops));
  g.validate();
  return g;
}

Graph loadGraph(const std::string& nodes_path, const std::string& edges_path,
                const LoadOptions& options) {
  std::ifstream nodes = openInput(nodes_path);
  std::string line;
  if (!std::getline(nodes, line)) throw DataError(nodes_path + ": empty file");
  const auto header = splitCsv(line);
  if (header.size() < 2 || header[0] != "id" || header[1] != "label") {
    throw DataError(where(nodes_path, 1) + ": header must start with 'id,label'");
  }
  const std::size_t d = header.size() - 2;

  struct Row {
    long long id;
    int label;
    std::vector<double> x;
  };
  std::vector<Row> rows;
  std::size_t row_no = 1;
  while (std::getline(nodes, line)) {
    ++row_no;
    if (trim(line).empty()) continue;
    const auto cells = splitCsv(line);
    if (cells.size() != header.size()) {
      throw DataError(where(nodes_path, row_no) + ": expected " + std::to_string(header.size()) +
                      " columns, got " + std::to_string(cells.size()));
    }
    Row r;
    r.id = parseInt(cells[0], nodes_path, row_no);
    r.label = static_cast<int>(parseInt(cells[1], nodes_path, row_no));
    if (r.label < -1) throw DataError(where(nodes_path, row_no) + ": label below -1");
    r.x.reserve(d);
    for (std::size_t c = 2; c < cells.size(); ++c)
      r.x.push_back(parseReal(cells[c], nodes_path, row_no));
    rows.push_back(std::move(r));
  }

  const std::size_t n = rows.size();
  Matrix features(n, d);
  std::vector<int> labels(n, -1);
  std::vector<char> seen(n, 0);
  row_no = 1;
  for (const Row& r : rows) {
    ++row_no;
    if (r.id < 0 || static_cast<std::size_t>(r.id) >= n) {
      throw DataError(nodes_path + ": node id " + std::to_string(r.id) +
                      " outside the contiguous range [0, " + std::to_string(n) + ")");
    }
    const auto v = static_cast<std::size_t>(r.id);
    if (seen[v]) throw DataError(nodes_path + ": duplicate node id " + std::to_string(r.id));
    seen[v] = 1;
    labels[v] = r.label;
    std::copy(r.x.begin(), r.x.end(), features.row(v).begin());
  }

  std::ifstream edges_in = openInput(edges_path);
  if (!std::getline(edges_in, line)) throw DataError(edges_path + ": empty file");
  const auto eh = splitCsv(line);
  if (eh.size() != 2 || eh[0] != "src" || eh[1] != "dst") {
    throw DataError(where(edges_path, 1) + ": header must be 'src,dst'");
  }
  std::vector<std::pair<NodeId, NodeId>> edges;
  row_no = 1;
  while (std::getline(edges_in, line)) {
    ++row_no;
    if (trim(line).empty()) continue;
    const auto cells = splitCsv(line);
    if (cells.size() != 2) throw DataError(where(edges_path, row_no) + ": expected 2 columns");
    const long long u = parseInt(cells[0], edges_path, row_no);
    const long long v = parseInt(cells[1], edges_path, row_no);
    for (long long e : {u, v}) {
      if (e < 0 || static_cast<std::size_t>(e) >= n) {
        throw DataError(where(edges_path, row_no) + ": dangling endpoint " + std::to_string(e));
      }
    }
    edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
  }
  return buildGraph(std::move(features), std::move(labels), edges, options);
}

void saveGraph(const Graph& g, const std::string& nodes_path, const std::string& edges_path) {
  std::ofstream nodes(nodes_path);
  if (!nodes) throw DataError("cannot write " + nodes_path);
  nodes << "id,label";
  for (std::size_t c = 0; c < g.numFeatures(); ++c) nodes << ",f" << c;
  nodes << '\n';
  for (std::size_t v = 0; v < g.numNodes(); ++v) {
    nodes << v << ',' << g.labels[v];
    for (double x : g.features.row(v)) nodes << ',' << formatReal(x);
    nodes << '\n';
  }
  std::ofstream edges(edges_path);
  if (!edges) throw DataError("cannot write " + edges_path);
  edges << "src,dst\n";
  const Csr& a = *g.adjacency;
  for (std::size_t k = 0; k < a.numEntries(); ++k)
    if (a.sources[k] < a.targets[k]) edges << a.sources[k] << ',' << a.targets[k] << '\n';
}

double imbalanceRatio(std::span<const std::size_t> class_counts) {
  if (class_counts.empty()) throw ContractError("imbalance ratio of zero classes");
  const auto [lo, hi] = std::minmax_element(class_counts.begin(), class_counts.end());
  if (*lo == 0) {
    throw ContractError("class " + std::to_string(lo - class_counts.begin()) +
                        " has no labeled node");
  }
  return static_cast<double>(*lo) / static_cast<double>(*hi);
}

double imbalanceRatio(const Graph& g) {
  const auto counts = g.classCounts();
  return imbalanceRatio(counts);
}

void SplitSpec::validate() const {
  for (double f : {train_fraction, val_fraction, test_fraction}) {
    if (!(f > 0.0)) throw ConfigError("split fractions must be positive");
  }
  if (std::abs(train_fraction + val_fraction + test_fraction - 1.0) > 1e-9) {
    throw ConfigError("split fractions must sum to 1");
  }
}

Graph stratifiedSplit(Graph g, const SplitSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::fill(g.split.begin(), g.split.end(), SplitTag::kNone);

  std::vector<std::vector<std::size_t>> groups;
  if (spec.stratified) {
    groups.resize(static_cast<std::size_t>(g.num_classes));
    for (std::size_t v = 0; v < g.numNodes(); ++v)
      if (g.labels[v] >= 0) groups[static_cast<std::size_t>(g.labels[v])].push_back(v);
  } else {
    groups.emplace_back();
    for (std::size_t v = 0; v < g.numNodes(); ++v)
      if (g.labels[v] >= 0) groups.back().push_back(v);
  }

  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    auto& nodes = groups[gi];
    std::shuffle(nodes.begin(), nodes.end(), rng);
    const std::size_t n = nodes.size();
    if (n == 0) continue;
    const auto nd = static_cast<double>(n);
    long long n_train = std::llround(spec.train_fraction * nd);
    long long n_val = std::llround(spec.val_fraction * nd);
    long long n_test = static_cast<long long>(n) - n_train - n_val;
    if (n_test < 0) {
      n_val += n_test;
      n_test = 0;
    }
    if (n < 3) {
      warn("group " + std::to_string(gi) + " has " + std::to_string(n) +
           " labeled node(s); it cannot appear in all three splits");
      n_train = 1;
      n_test = n >= 2 ? 1 : 0;
      n_val = 0;
    } else {
      long long* counts[] = {&n_train, &n_val, &n_test};
      for (long long* c : counts) {
        if (*c > 0) continue;
        long long** largest = std::max_element(
            std::begin(counts), std::end(counts), [](long long* a, long long* b) { return *a < *b; });
        --**largest;
        *c = 1;
      }
    }
    std::size_t i = 0;
    for (long long k = 0; k < n_train; ++k) g.split[nodes[i++]] = SplitTag::kTrain;
    for (long long k = 0; k < n_val; ++k) g.split[nodes[i++]] = SplitTag::kVal;
    while (i < n) g.split[nodes[i++]] = SplitTag::kTest;
  }
  return g;
}

Graph applySplits(Graph g, const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("splits document is not valid JSON: ") + e.what());
  }
  std::fill(g.split.begin(), g.split.end(), SplitTag::kNone);
  for (const char* name : {"train", "val", "test"}) {
    if (!doc.contains(name)) continue;
    const SplitTag tag = parseSplitName(name);
    for (const auto& id : doc.at(name)) {
      if (!id.is_number_integer()) throw DataError(std::string("non-integer id in split ") + name);
      const long long v = id.get<long long>();
      if (v < 0 || static_cast<std::size_t>(v) >= g.numNodes()) {
        throw DataError("split " + std::string(name) + " references unknown node " +
                        std::to_string(v));
      }
      const auto u = static_cast<std::size_t>(v);
      if (g.split[u] != SplitTag::kNone) {
        throw DataError("node " + std::to_string(v) + " listed in more than one split");
      }
      if (g.labels[u] < 0) throw DataError("unlabeled node " + std::to_string(v) + " in a split");
      g.split[u] = tag;
    }
  }
  return g;
}

Graph applySplitsFile(Graph g, const std::string& path) {
  std::ifstream in = openInput(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return applySplits(std::move(g), ss.str());
}

Graph subsampleToIR(const Graph& g, double target_ir, std::uint64_t seed) {
  if (!(target_ir > 0.0 && target_ir <= 1.0)) {
    throw ContractError("target imbalance ratio must lie in (0, 1]");
  }
  const auto counts = g.classCounts();
  const double current = imbalanceRatio(counts);
  if (target_ir < current - 1e-12) {
    throw ContractError("target IR " + std::to_string(target_ir) +
                        " is below the current IR " + std::to_string(current) +
                        "; downsampling cannot decrease the ratio");
  }
  const std::size_t min_count = *std::min_element(counts.begin(), counts.end());
  const auto cap = static_cast<std::size_t>(
      std::max<long long>(1, std::llround(static_cast<double>(min_count) / target_ir)));

  std::mt19937_64 rng(seed);
  std::vector<char> keep(g.numNodes(), 1);
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] <= cap) continue;
    std::vector<std::size_t> members;
    for (std::size_t v = 0; v < g.numNodes(); ++v)
      if (g.labels[v] == static_cast<int>(c)) members.push_back(v);
    std::shuffle(members.begin(), members.end(), rng);
    for (std::size_t i = cap; i < members.size(); ++i) keep[members[i]] = 0;
  }

  std::vector<NodeId> new_id(g.numNodes(), 0);
  std::size_t n = 0;
  for (std::size_t v = 0; v < g.numNodes(); ++v)
    if (keep[v]) new_id[v] = static_cast<NodeId>(n++);

  Graph out;
  out.num_classes = g.num_classes;
  out.self_loops = g.self_loops;
  out.features = Matrix(n, g.numFeatures());
  out.labels.reserve(n);
  out.split.reserve(n);
  for (std::size_t v = 0; v < g.numNodes(); ++v) {
    if (!keep[v]) continue;
    std::copy(g.features.row(v).begin(), g.features.row(v).end(),
              out.features.row(new_id[v]).begin());
    out.labels.push_back(g.labels[v]);
    out.split.push_back(g.split[v]);
  }
  std::vector<std::pair<NodeId, NodeId>> edges;
  const Csr& a = *g.adjacency;
  for (std::size_t k = 0; k < a.numEntries(); ++k) {
    const NodeId u = a.sources[k], v = a.targets[k];
    if (u < v && keep[u] && keep[v]) edges.emplace_back(new_id[u], new_id[v]);
  }
  out.adjacency = std::make_shared<Csr>(Csr::fromUndirectedEdges(n, edges, g.self_loops));
  out.validate();
  return out;
}

void SyntheticSpec::validate() const {
  if (nodes_per_class.empty()) throw ConfigError("synthetic spec needs at least one class");
  for (std::size_t c : nodes_per_class)
    if (c < 1) throw ConfigError("every synthetic class needs at least one node");
  for (double p : {intra_class_edge_prob, inter_class_edge_prob})
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("edge probabilities must lie in [0, 1]");
  if (feature_dim < nodes_per_class.size()) {
    throw ConfigError("feature_dim must be at least the number of classes");
  }
  if (!(feature_noise_std >= 0.0)) throw ConfigError("feature noise must be nonnegative");
}

Graph generateSynthetic(const SyntheticSpec& spec, bool self_loops) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  const std::size_t n = std::accumulate(spec.nodes_per_class.begin(), spec.nodes_per_class.end(),
                                        std::size_t{0});
  std::vector<int> labels;
  labels.reserve(n);
  for (std::size_t c = 0; c < spec.nodes_per_class.size(); ++c)
    labels.insert(labels.end(), spec.nodes_per_class[c], static_cast<int>(c));

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double p =
          labels[i] == labels[j] ? spec.intra_class_edge_prob : spec.inter_class_edge_prob;
      if (unit(rng) < p) edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(j));
    }
  }

  std::normal_distribution<double> noise(0.0, 1.0);
  Matrix x(n, spec.feature_dim);
  const double offset = spec.class_mean_separation / std::sqrt(2.0);
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t c = 0; c < spec.feature_dim; ++c)
      x(v, c) = spec.feature_noise_std * noise(rng);
    x(v, static_cast<std::size_t>(labels[v])) += offset;
  }

  LoadOptions opts;
  opts.self_loops = self_loops;
  opts.standardize = false;
  opts.num_classes = static_cast<int>(spec.nodes_per_class.size());
  return buildGraph(std::move(x), std::move(labels), edges, opts);
}

}  // namespace gatcobo
