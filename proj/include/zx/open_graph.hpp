// Copyright 2026 The zxverify Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <map>
#include <set>
#include <vector>

namespace zx {

/// Undirected simple graph with distinguished input and output vertex sets
/// (which may overlap).
struct OpenGraph {
  std::set<int> vertices;
  std::set<std::pair<int, int>> edges;  // stored with u < v
  std::set<int> inputs, outputs;

  void add_vertex(int v) { vertices.insert(v); }
  void add_edge(int u, int v) {
    if (u == v) return;
    add_vertex(u);
    add_vertex(v);
    edges.insert({std::min(u, v), std::max(u, v)});
  }
  bool adjacent(int u, int v) const {
    return edges.count({std::min(u, v), std::max(u, v)}) != 0;
  }
  std::vector<int> neighbours(int v) const {
    std::vector<int> out;
    for (const auto& [a, b] : edges) {
      if (a == v) out.push_back(b);
      if (b == v) out.push_back(a);
    }
    return out;
  }

  bool operator==(const OpenGraph& other) const = default;
};

}  // namespace zx
