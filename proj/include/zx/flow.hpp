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
#include <optional>
#include <string>
#include <vector>

#include "zx/diagram.hpp"
#include "zx/open_graph.hpp"
#include "zx/serialize.hpp"

namespace zx {

struct FlowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Causal flow: a successor function on measured vertices together with a
/// strict partial order, stored as the list of forced relations u < v.
struct Flow {
  std::map<int, int> f;                     // V \ O  ->  V \ I
  std::vector<std::pair<int, int>> order;   // generating relations

  /// Topological order of the relation DAG (ties by vertex id).
  std::vector<int> topological(const OpenGraph& g) const;
};

/// Checks totality of f and conditions F1-F3, and that the relations
/// generate a strict partial order (acyclic).
bool verify_flow(const OpenGraph& g, const Flow& fl);

/// Backward greedy flow construction: repeatedly pick an unused corrector
/// with a unique uncorrected neighbour.  Returns a flow or nothing.
std::optional<Flow> find_flow(const OpenGraph& g);

/// Exhaustive oracle over all successor functions satisfying F1, accepting
/// the first whose forced relations are acyclic.  Requires |V \ O| <= 8.
std::optional<Flow> brute_force_flow(const OpenGraph& g);

Json to_json(const Flow& fl);

/// The unconditional diagram of an open graph: a phase-free Z spider per
/// vertex, an H vertex per edge, boundary vertices for inputs and outputs
/// (a vertex in both gets separate input and output boundaries).
struct GeometryDiagram {
  Diagram diagram;
  std::map<int, VertexId> vertex_of;  // graph vertex -> Z spider
  std::map<int, VertexId> input_boundary, output_boundary;
};
GeometryDiagram diagram_of_geometry(const OpenGraph& g);

/// A disjoint directed path cover; each path is listed source first and
/// ends in an output boundary vertex.
struct PathCover {
  std::vector<std::vector<VertexId>> paths;
};

struct CircuitLikeVerdict {
  bool ok = false;
  std::string violation;  // which condition failed, with a witness note
  std::optional<PathCover> cover;
};

/// Circuit-likeness: a disjoint path cover into the outputs (strict mode
/// covers every vertex; weak mode may leave out H vertices joining two
/// same-colour spiders), no cycle running with two different paths, simple
/// and properly three-coloured.  Conditional diagrams are rejected.
CircuitLikeVerdict is_circuit_like(const Diagram& d, bool weak);

/// Reads a causal flow off a path cover of a geometry diagram: the
/// successor of u is the next graph vertex along its path.
Flow flow_from_paths(const OpenGraph& g, const GeometryDiagram& gd,
                     const PathCover& cover);

}  // namespace zx
