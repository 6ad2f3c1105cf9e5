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

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "zx/phase.hpp"

namespace zx {

using VertexId = std::uint32_t;

struct DiagramError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Finite set of Boolean signal names, kept deduplicated and sorted so that
/// set equality coincides with representation equality.
class ConditionSet {
 public:
  ConditionSet() = default;
  explicit ConditionSet(std::vector<std::string> signals);

  static ConditionSet single(const std::string& signal) {
    return ConditionSet({signal});
  }

  bool empty() const { return signals_.empty(); }
  std::size_t size() const { return signals_.size(); }
  bool contains(const std::string& s) const;
  const std::vector<std::string>& signals() const { return signals_; }

  bool operator==(const ConditionSet& other) const = default;

  std::string to_string() const;

 private:
  std::vector<std::string> signals_;
};

/// Total assignment of bits to signals; selects one execution branch.
class Valuation {
 public:
  Valuation() = default;
  explicit Valuation(std::map<std::string, int> bits) : bits_(std::move(bits)) {}

  void set(const std::string& signal, int bit) { bits_[signal] = bit ? 1 : 0; }
  std::optional<int> get(const std::string& signal) const;
  const std::map<std::string, int>& bits() const { return bits_; }

  /// Arithmetic-sum activation: a condition set fires iff the sum of its
  /// signals' values is at least one.  Throws on a missing signal.
  bool activates(const ConditionSet& cond) const;

  bool operator==(const Valuation& other) const = default;
  std::string to_string() const;

  /// All 2^n valuations of the given signal set, in binary counting order
  /// (first signal = most significant bit).
  static std::vector<Valuation> enumerate(const std::vector<std::string>& signals);

 private:
  std::map<std::string, int> bits_;
};

enum class VertexType : std::uint8_t { Z, X, H, Boundary };

/// Other spider colour; H and Boundary are fixed points.
VertexType dual_type(VertexType t);

struct VertexKind {
  VertexType type = VertexType::Z;
  PhaseExpr phase;
  ConditionSet cond;

  static VertexKind z(PhaseExpr p = {}, ConditionSet c = {});
  static VertexKind x(PhaseExpr p = {}, ConditionSet c = {});
  static VertexKind h() { return VertexKind{VertexType::H, {}, {}}; }
  static VertexKind boundary() { return VertexKind{VertexType::Boundary, {}, {}}; }
  static VertexKind spider(VertexType t, PhaseExpr p = {}, ConditionSet c = {});

  bool is_spider() const { return type == VertexType::Z || type == VertexType::X; }
  bool is_conditional() const { return !cond.empty(); }

  bool operator==(const VertexKind& other) const = default;
};

/// Open multigraph of typed vertices: the rewriting IR.  Parallel edges and
/// self-loops are permitted in intermediate states.  Boundary vertices are
/// reified degree-one nodes listed, in order, as inputs or outputs.
class Diagram {
 public:
  Diagram() = default;

  // -- construction -------------------------------------------------------
  VertexId add_vertex(const VertexKind& kind);
  void add_edge(VertexId u, VertexId v);
  /// Removes one occurrence of edge {u, v}; throws if absent.
  void remove_edge(VertexId u, VertexId v);
  /// Removes the vertex together with all incident edges.
  void remove_vertex(VertexId v);
  void set_kind(VertexId v, const VertexKind& kind);
  VertexId add_input(std::size_t at_index = SIZE_MAX);
  VertexId add_output(std::size_t at_index = SIZE_MAX);
  /// Appends an existing boundary vertex to the input/output order.
  void mark_input(VertexId v);
  void mark_output(VertexId v);

  // -- access -------------------------------------------------------------
  bool has_vertex(VertexId v) const { return vertices_.count(v) != 0; }
  const VertexKind& kind(VertexId v) const;
  const std::map<VertexId, VertexKind>& vertices() const { return vertices_; }
  const std::vector<std::pair<VertexId, VertexId>>& edges() const { return edges_; }
  const std::vector<VertexId>& inputs() const { return inputs_; }
  const std::vector<VertexId>& outputs() const { return outputs_; }

  std::size_t degree(VertexId v) const;
  /// Neighbours with multiplicity; a self-loop contributes the vertex twice.
  std::vector<VertexId> neighbours(VertexId v) const;
  std::size_t edge_multiplicity(VertexId u, VertexId v) const;
  bool is_boundary(VertexId v) const;

  /// Signals occurring in any condition set, sorted.
  std::vector<std::string> signal_set() const;
  /// Symbolic angle variables occurring in any phase, sorted.
  std::vector<std::string> angle_variables() const;
  bool is_unconditional() const { return signal_set().empty(); }

  // -- spec operations ----------------------------------------------------
  /// Plugs `second` onto the outputs of `first` (i-th output fused with the
  /// i-th input); both boundary vertices are deleted and their interior
  /// neighbours joined by an edge.
  static Diagram compose(const Diagram& first, const Diagram& second);
  /// Disjoint union; inputs/outputs of `left` ordered before `right`.
  static Diagram tensor(const Diagram& left, const Diagram& right);
  /// Inputs and outputs exchanged, every spider phase negated.
  Diagram dagger() const;
  /// Replaces each conditional phase by 0 (sum of its signals zero) or its
  /// own value; the result carries no condition sets.
  Diagram apply_valuation(const Valuation& v) const;

  /// Structural equality: label-, phase-, condition- and boundary-order
  /// preserving graph isomorphism.
  static bool iso_equal(const Diagram& a, const Diagram& b);

  /// Report-style invariant check; empty means well-formed.
  std::vector<std::string> validate() const;
  void require_valid(const std::string& context) const;

  /// FNV-1a digest of the canonical serialization.
  std::uint64_t hash() const;

 private:
  static std::map<VertexId, VertexId> merge_into(Diagram& dst,
                                                 const Diagram& src,
                                                 bool append_io);

  std::map<VertexId, VertexKind> vertices_;
  std::vector<std::pair<VertexId, VertexId>> edges_;  // stored with u <= v
  std::vector<VertexId> inputs_, outputs_;
  VertexId next_id_ = 0;
};

/// n parallel wires (identity diagram).
Diagram identity_diagram(std::size_t n);

}  // namespace zx
