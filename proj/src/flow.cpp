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

#include "zx/flow.hpp"

#include <algorithm>
#include <functional>

namespace zx {

namespace {

// Forced relations F2/F3 for one assignment f(u) = v.
void forced_relations(const OpenGraph& g, int u, int v,
                      std::vector<std::pair<int, int>>& out) {
  out.emplace_back(u, v);
  for (int w : g.neighbours(v))
    if (w != u) out.emplace_back(u, w);
}

bool relations_acyclic(const std::vector<std::pair<int, int>>& rel) {
  std::map<int, std::vector<int>> adj;
  std::set<int> nodes;
  for (const auto& [a, b] : rel) {
    if (a == b) return false;
    adj[a].push_back(b);
    nodes.insert(a);
    nodes.insert(b);
  }
  std::map<int, int> state;  // 0 fresh, 1 active, 2 done
  std::function<bool(int)> dfs = [&](int x) {
    state[x] = 1;
    for (int y : adj[x]) {
      if (state[y] == 1) return false;
      if (state[y] == 0 && !dfs(y)) return false;
    }
    state[x] = 2;
    return true;
  };
  for (int x : nodes)
    if (state[x] == 0 && !dfs(x)) return false;
  return true;
}

}  // namespace

std::vector<int> Flow::topological(const OpenGraph& g) const {
  std::map<int, std::vector<int>> adj;
  std::map<int, int> indeg;
  for (int v : g.vertices) indeg[v] = 0;
  for (const auto& [a, b] : order) {
    adj[a].push_back(b);
    ++indeg[b];
  }
  std::vector<int> out;
  std::set<int> ready;
  for (const auto& [v, deg] : indeg)
    if (deg == 0) ready.insert(v);
  while (!ready.empty()) {
    int v = *ready.begin();
    ready.erase(ready.begin());
    out.push_back(v);
    for (int w : adj[v])
      if (--indeg[w] == 0) ready.insert(w);
  }
  if (out.size() != indeg.size())
    throw FlowError("flow order relations contain a cycle");
  return out;
}

bool verify_flow(const OpenGraph& g, const Flow& fl) {
  for (int u : g.vertices)
    if (!g.outputs.count(u) && !fl.f.count(u))
      throw FlowError("flow function is not total on measured vertices");

  for (const auto& [u, v] : fl.f) {
    if (!g.vertices.count(u) || g.outputs.count(u)) return false;
    if (g.inputs.count(v)) return false;   // range must avoid inputs
    if (!g.adjacent(u, v)) return false;   // F1
  }

  // The stated order must be a strict partial order containing F2 and F3.
  if (!relations_acyclic(fl.order)) return false;
  std::set<std::pair<int, int>> closure;
  {
    std::map<int, std::vector<int>> adj;
    for (const auto& [a, b] : fl.order) adj[a].push_back(b);
    for (int s : g.vertices) {
      std::vector<int> stack = {s};
      std::set<int> seen;
      while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        for (int y : adj[x])
          if (seen.insert(y).second) stack.push_back(y);
      }
      for (int y : seen) closure.insert({s, y});
    }
  }
  for (const auto& [u, v] : fl.f) {
    if (!closure.count({u, v})) return false;  // F2
    for (int w : g.neighbours(v))
      if (w != u && !closure.count({u, w})) return false;  // F3
  }
  return true;
}

std::optional<Flow> find_flow(const OpenGraph& g) {
  std::set<int> corrected = g.outputs;
  std::set<int> correctors;
  for (int v : g.outputs)
    if (!g.inputs.count(v)) correctors.insert(v);

  Flow fl;
  bool progress = true;
  while (progress) {
    progress = false;
    // Snapshot: all picks in a round see the same corrected set boundary,
    // but assignments apply immediately (first corrector wins).
    std::vector<int> round(correctors.begin(), correctors.end());
    for (int v : round) {
      std::vector<int> open;
      for (int w : g.neighbours(v))
        if (!corrected.count(w)) open.push_back(w);
      if (open.size() != 1) continue;
      const int u = open.front();
      if (fl.f.count(u)) continue;
      fl.f[u] = v;
      corrected.insert(u);
      correctors.erase(v);
      if (!g.inputs.count(u)) correctors.insert(u);
      progress = true;
    }
  }
  if (corrected.size() != g.vertices.size()) return std::nullopt;

  for (const auto& [u, v] : fl.f) forced_relations(g, u, v, fl.order);
  std::sort(fl.order.begin(), fl.order.end());
  fl.order.erase(std::unique(fl.order.begin(), fl.order.end()), fl.order.end());
  return fl;
}

std::optional<Flow> brute_force_flow(const OpenGraph& g) {
  std::vector<int> measured;
  for (int v : g.vertices)
    if (!g.outputs.count(v)) measured.push_back(v);
  if (measured.size() > 8)
    throw FlowError("brute_force_flow size bound exceeded");

  std::map<int, std::vector<int>> candidates;
  for (int u : measured) {
    for (int w : g.neighbours(u))
      if (!g.inputs.count(w)) candidates[u].push_back(w);
    if (candidates[u].empty()) return std::nullopt;  // F1 unsatisfiable
  }

  Flow fl;
  std::set<int> used;  // valid flows have injective f
  std::vector<std::pair<int, int>> rel;
  std::function<bool(std::size_t)> assign = [&](std::size_t idx) -> bool {
    if (idx == measured.size()) return true;
    const int u = measured[idx];
    for (int v : candidates[u]) {
      if (used.count(v)) continue;
      const std::size_t mark = rel.size();
      forced_relations(g, u, v, rel);
      if (relations_acyclic(rel)) {
        fl.f[u] = v;
        used.insert(v);
        if (assign(idx + 1)) return true;
        fl.f.erase(u);
        used.erase(v);
      }
      rel.resize(mark);
    }
    return false;
  };
  if (!assign(0)) return std::nullopt;

  fl.order = rel;
  std::sort(fl.order.begin(), fl.order.end());
  fl.order.erase(std::unique(fl.order.begin(), fl.order.end()), fl.order.end());
  return fl;
}

Json to_json(const Flow& fl) {
  Json j;
  Json f = Json::array();
  for (const auto& [u, v] : fl.f) f.push_back(Json::array({u, v}));
  j["f"] = std::move(f);
  Json order = Json::array();
  for (const auto& [u, v] : fl.order) order.push_back(Json::array({u, v}));
  j["order"] = std::move(order);
  return j;
}

GeometryDiagram diagram_of_geometry(const OpenGraph& g) {
  GeometryDiagram out;
  Diagram& d = out.diagram;
  for (int v : g.vertices) out.vertex_of[v] = d.add_vertex(VertexKind::z());
  for (const auto& [u, v] : g.edges) {
    VertexId h = d.add_vertex(VertexKind::h());
    d.add_edge(out.vertex_of[u], h);
    d.add_edge(h, out.vertex_of[v]);
  }
  for (int v : g.inputs) {
    VertexId b = d.add_input();
    out.input_boundary[v] = b;
    d.add_edge(b, out.vertex_of[v]);
  }
  for (int v : g.outputs) {
    VertexId b = d.add_output();
    out.output_boundary[v] = b;
    d.add_edge(out.vertex_of[v], b);
  }
  d.require_valid("geometry diagram");
  return out;
}

// ---------------------------------------------------------------------------
// circuit-likeness
// ---------------------------------------------------------------------------

namespace {

// C3/W3: simple graph, properly three-coloured on {Z, X, H}.
std::optional<std::string> simple_three_coloured(const Diagram& d) {
  for (const auto& [u, v] : d.edges()) {
    if (u == v) return "self-loop at vertex " + std::to_string(u);
    if (d.edge_multiplicity(u, v) > 1)
      return "parallel edges between " + std::to_string(u) + " and " +
             std::to_string(v);
    const VertexType tu = d.kind(u).type, tv = d.kind(v).type;
    if (tu == tv && tu != VertexType::Boundary)
      return "adjacent same-type vertices " + std::to_string(u) + " and " +
             std::to_string(v);
  }
  return std::nullopt;
}

// C2/W2 via strongly connected components: arcs are path edges (forward
// only) plus both directions of every other edge.  A violation is an SCC
// containing path edges of two different paths.
bool causally_consistent(const Diagram& d, const PathCover& cover,
                         std::string* witness) {
  std::map<std::pair<VertexId, VertexId>, int> path_edge;  // directed -> path
  for (std::size_t pi = 0; pi < cover.paths.size(); ++pi) {
    const auto& path = cover.paths[pi];
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
      path_edge[{path[i], path[i + 1]}] = static_cast<int>(pi);
  }
  std::map<VertexId, std::vector<VertexId>> adj;
  for (const auto& [u, v] : d.edges()) {
    const bool fwd = path_edge.count({u, v}) != 0;
    const bool bwd = path_edge.count({v, u}) != 0;
    if (fwd) {
      adj[u].push_back(v);
    } else if (bwd) {
      adj[v].push_back(u);
    } else {
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
  }
  // Tarjan SCC (iterative would be overkill at this scale).
  std::map<VertexId, int> index, low;
  std::vector<VertexId> stack;
  std::set<VertexId> on_stack;
  std::map<VertexId, int> scc;
  int next_index = 0, next_scc = 0;
  std::function<void(VertexId)> strongconnect = [&](VertexId v) {
    index[v] = low[v] = next_index++;
    stack.push_back(v);
    on_stack.insert(v);
    for (VertexId w : adj[v]) {
      if (!index.count(w)) {
        strongconnect(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack.count(w)) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      while (true) {
        VertexId w = stack.back();
        stack.pop_back();
        on_stack.erase(w);
        scc[w] = next_scc;
        if (w == v) break;
      }
      ++next_scc;
    }
  };
  for (const auto& [id, k] : d.vertices())
    if (!index.count(id)) strongconnect(id);

  std::map<int, std::set<int>> paths_in_scc;
  for (const auto& [edge, pi] : path_edge) {
    if (scc[edge.first] == scc[edge.second])
      paths_in_scc[scc[edge.first]].insert(pi);
  }
  for (const auto& [component, paths] : paths_in_scc) {
    if (paths.size() >= 2) {
      if (witness)
        *witness = "cycle runs with paths " +
                   std::to_string(*paths.begin()) + " and " +
                   std::to_string(*std::next(paths.begin()));
      return false;
    }
  }
  return true;
}

// Enumerates disjoint path covers of `required` whose paths end in the
// outputs, invoking `accept` on each complete cover until it returns true.
// Returns whether any cover was accepted; `any_cover` reports whether at
// least one cover exists at all.
bool search_path_covers(const Diagram& d, const std::set<VertexId>& required,
                        const std::function<bool(const PathCover&)>& accept,
                        bool* any_cover) {
  const auto& outs = d.outputs();
  PathCover cover;
  std::set<VertexId> used;

  std::function<bool(std::size_t)> build = [&](std::size_t oi) -> bool {
    if (oi == outs.size()) {
      for (VertexId v : required)
        if (!used.count(v)) return false;
      if (any_cover) *any_cover = true;
      return accept(cover);
    }
    VertexId out = outs[oi];
    if (used.count(out)) return build(oi + 1);  // already inside another path
    std::vector<VertexId> path = {out};
    used.insert(out);

    std::function<bool()> extend = [&]() -> bool {
      // Option A: close the path here and move to the next output.
      cover.paths.push_back({path.rbegin(), path.rend()});
      if (build(oi + 1)) return true;
      cover.paths.pop_back();
      // Option B: extend backward through any unused vertex (paths may pass
      // through vertices that are not required to be covered).
      VertexId head = path.back();
      for (VertexId w : d.neighbours(head)) {
        if (used.count(w)) continue;
        path.push_back(w);
        used.insert(w);
        if (extend()) return true;
        used.erase(w);
        path.pop_back();
      }
      return false;
    };
    if (extend()) return true;
    used.erase(out);
    return false;
  };
  return build(0);
}

}  // namespace

CircuitLikeVerdict is_circuit_like(const Diagram& d, bool weak) {
  for (const auto& [id, k] : d.vertices())
    if (k.is_conditional())
      throw DiagramError("is_circuit_like requires an unconditional diagram");

  CircuitLikeVerdict verdict;
  if (auto bad = simple_three_coloured(d)) {
    verdict.violation = std::string(weak ? "W3" : "C3") + ": " + *bad;
    return verdict;
  }

  std::set<VertexId> required;
  for (const auto& [id, k] : d.vertices()) required.insert(id);
  if (weak) {
    // H vertices between two same-colour spiders need not be covered.
    for (const auto& [id, k] : d.vertices()) {
      if (k.type != VertexType::H) continue;
      auto ns = d.neighbours(id);
      if (ns.size() == 2 && d.kind(ns[0]).is_spider() &&
          d.kind(ns[1]).is_spider() &&
          d.kind(ns[0]).type == d.kind(ns[1]).type)
        required.erase(id);
    }
  }

  // Search covers until one also passes the causal-consistency condition.
  bool any_cover = false;
  std::string witness;
  PathCover found;
  const bool ok = search_path_covers(
      d, required,
      [&](const PathCover& cover) {
        if (!causally_consistent(d, cover, &witness)) return false;
        found = cover;
        return true;
      },
      &any_cover);
  if (ok) {
    verdict.ok = true;
    verdict.cover = std::move(found);
    return verdict;
  }
  if (!any_cover)
    verdict.violation = std::string(weak ? "W1" : "C1") +
                        ": no disjoint path cover into the outputs";
  else
    verdict.violation = std::string(weak ? "W2" : "C2") + ": " + witness;
  return verdict;
}

Flow flow_from_paths(const OpenGraph& g, const GeometryDiagram& gd,
                     const PathCover& cover) {
  std::map<VertexId, int> graph_vertex;
  for (const auto& [v, id] : gd.vertex_of) graph_vertex[id] = v;

  Flow fl;
  for (const auto& path : cover.paths) {
    std::vector<int> chain;
    for (VertexId id : path) {
      auto it = graph_vertex.find(id);
      if (it != graph_vertex.end()) chain.push_back(it->second);
    }
    for (std::size_t i = 0; i + 1 < chain.size(); ++i)
      fl.f[chain[i]] = chain[i + 1];
  }
  for (const auto& [u, v] : fl.f) forced_relations(g, u, v, fl.order);
  std::sort(fl.order.begin(), fl.order.end());
  fl.order.erase(std::unique(fl.order.begin(), fl.order.end()), fl.order.end());
  return fl;
}

}  // namespace zx
