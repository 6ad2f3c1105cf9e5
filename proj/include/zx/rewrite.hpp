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
#include <optional>
#include <string>
#include <vector>

#include "zx/diagram.hpp"
#include "zx/serialize.hpp"

namespace zx {

struct RewriteError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Rule {
  Spider,
  Identity,
  AntiLoop,
  Copying,
  PiCommute,
  AlphaCommute,
  Bialgebra,
  Hopf,
  HCommute,
  HCancel,
};

/// A rule together with its colour-dual flag.  The non-dual form is stated
/// for the Z subsystem; the dual form has the colours reversed.
struct RuleId {
  Rule rule;
  bool dual = false;

  bool operator==(const RuleId& other) const = default;
  std::string name() const;
  static RuleId from_name(const std::string& name);
  static std::vector<RuleId> all();
};

/// An occurrence of a rule's left-hand side.
struct MatchSite {
  RuleId rule;
  std::vector<VertexId> anchors;
};

/// Complete, deterministically ordered enumeration of the rule's matches.
std::vector<MatchSite> find_matches(const Diagram& d, RuleId rule);

/// Substitutes the right-hand side at the site.  Throws RewriteError if the
/// site is stale (no longer matches the diagram).
Diagram apply(const Diagram& d, const MatchSite& site);

struct TraceStep {
  std::string rule;
  std::vector<VertexId> anchors;
  std::uint64_t hash = 0;  // canonical digest of the diagram after the step
};

struct RewriteTrace {
  std::vector<TraceStep> steps;

  void append(std::string rule, std::vector<VertexId> anchors, const Diagram& after);
  Json to_json() const;
  static RewriteTrace from_json(const Json& j);
};

/// Re-applies the steps of a trace to `initial`, checking every recorded
/// digest; returns the final diagram or throws RewriteError on divergence.
Diagram replay(const Diagram& initial, const RewriteTrace& trace);

enum class Strategy { Fuse, Full };
Strategy strategy_from_string(const std::string& s);

/// Fixpoint simplification.  `Fuse` runs spider fusion, identity removal,
/// self-loop removal and H-cancellation; `Full` adds Hopf, copying and
/// colour normalisation towards Z spiders.
std::pair<Diagram, RewriteTrace> simplify(const Diagram& d, Strategy strategy);

/// Result of propagating a conditional pi vertex along its wire.
struct PushResult {
  Diagram diagram;
  RewriteTrace trace;
  bool progress = false;
  /// Conditional vertices that could not be cancelled or absorbed, e.g.
  /// errors waiting to be deferred through a later measurement.
  std::vector<VertexId> parked;
};

/// Pushes the conditional pi spider at `error_vertex` forward: it cancels
/// against a matching corrector, or commutes through the adjacent
/// opposite-colour spider, emitting conditional pi vertices on that spider's
/// other wires (which are then resolved locally where possible).  A blocked
/// configuration returns the diagram unchanged with an empty trace.
/// `toward` optionally names a vertex to steer the propagation at forks.
PushResult push_error(const Diagram& d, VertexId error_vertex,
                      std::optional<VertexId> toward = std::nullopt);

struct SoundnessReport {
  RuleId rule;
  int trials = 0;
  int failures = 0;
  std::vector<Json> counterexamples;  // serialized failing instances
};

/// Random-instance soundness check: generates LHS instances of the rule
/// (random arities, rational and symbolic phases, condition sets over at
/// most two signals), applies the rule, and compares superoperator
/// semantics up to scalar at each probe angle.
SoundnessReport check_rule_soundness(RuleId rule, int trials, double tol,
                                     std::uint64_t seed = 0);

/// Default numeric probe set for symbolic angles.
const std::vector<double>& default_angle_probes();

}  // namespace zx
