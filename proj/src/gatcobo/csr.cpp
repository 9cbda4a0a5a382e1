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

#include <algorithm>
#include <string>

namespace gatcobo {

std::size_t Csr::find(NodeId u, NodeId v) const {
  const auto begin = targets.begin() + static_cast<std::ptrdiff_t>(offsets[u]);
  const auto end = targets.begin() + static_cast<std::ptrdiff_t>(offsets[u + 1]);
  const auto it = std::lower_bound(begin, end, v);
  if (it == end || *it != v) return numEntries();
  return static_cast<std::size_t>(it - targets.begin());
}

bool Csr::hasEntry(NodeId u, NodeId v) const { return find(u, v) != numEntries(); }

Csr Csr::fromUndirectedEdges(std::size_t num_nodes,
                             const std::vector<std::pair<NodeId, NodeId>>& edges,
                             bool self_loops) {
  std::vector<std::pair<NodeId, NodeId>> directed;
  directed.reserve(edges.size() * 2 + (self_loops ? num_nodes : 0));
  for (const auto& [u, v] : edges) {
    if (u >= num_nodes || v >= num_nodes) {
      throw DataError("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                      ") references a node outside [0, " + std::to_string(num_nodes) + ")");
    }
    if (u == v) continue;
    directed.emplace_back(u, v);
    directed.emplace_back(v, u);
  }
  if (self_loops) {
    for (std::size_t v = 0; v < num_nodes; ++v)
      directed.emplace_back(static_cast<NodeId>(v), static_cast<NodeId>(v));
  }
  std::sort(directed.begin(), directed.end());
  directed.erase(std::unique(directed.begin(), directed.end()), directed.end());

  Csr csr;
  csr.offsets.assign(num_nodes + 1, 0);
  csr.targets.reserve(directed.size());
  csr.sources.reserve(directed.size());
  for (const auto& [u, v] : directed) {
    ++csr.offsets[u + 1];
    csr.sources.push_back(u);
    csr.targets.push_back(v);
  }
  for (std::size_t i = 0; i < num_nodes; ++i) csr.offsets[i + 1] += csr.offsets[i];
  return csr;
}

}  // namespace gatcobo
