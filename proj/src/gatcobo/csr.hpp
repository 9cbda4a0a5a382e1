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

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace gatcobo {

using NodeId = std::uint32_t;

// Compressed sparse row adjacency. Row i lists the neighbors of node i in
// ascending order; `sources` repeats the row index of every entry so that
// edge-parallel kernels do not need a search.
struct Csr {
  std::vector<std::size_t> offsets{0};
  std::vector<NodeId> targets;
  std::vector<NodeId> sources;

  std::size_t numNodes() const { return offsets.size() - 1; }
  std::size_t numEntries() const { return targets.size(); }
  std::size_t degree(NodeId v) const { return offsets[v + 1] - offsets[v]; }
  bool hasEntry(NodeId u, NodeId v) const;
  // Position of entry (u, v) in `targets`, or numEntries() when absent.
  std::size_t find(NodeId u, NodeId v) const;

  // Symmetrized, deduplicated adjacency. Self-pairs in `edges` are dropped;
  // when `self_loops` is set every node receives exactly one (v, v) entry.
  static Csr fromUndirectedEdges(std::size_t num_nodes,
                                 const std::vector<std::pair<NodeId, NodeId>>& edges,
                                 bool self_loops);

  friend bool operator==(const Csr&, const Csr&) = default;
};

}  // namespace gatcobo
