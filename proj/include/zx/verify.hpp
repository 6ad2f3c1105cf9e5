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

#include <optional>
#include <string>
#include <vector>

#include "zx/eval.hpp"
#include "zx/flow.hpp"
#include "zx/pattern.hpp"
#include "zx/rewrite.hpp"

namespace zx {

/// One linear map per measurement-outcome valuation.
struct BranchMaps {
  std::vector<std::string> signals;
  std::vector<std::pair<Valuation, DenseOperator>> branches;

  /// The all-zero-outcome branch: the intended computation.
  const DenseOperator& positive() const { return branches.front().second; }
};

/// Evaluates every execution branch of the pattern through its diagram.
BranchMaps branch_maps(const Pattern& p, const AngleAssignment& a = {});

struct DeterminismCheck {
  bool deterministic = false;
  std::optional<std::pair<Valuation, Valuation>> witness;
  double gap = 0.0;  // max-norm residual of the witness pair after scaling
};

/// All branch maps proportional to the positive branch, at one assignment.
/// Throws FlowError when the signal count exceeds `signal_bound`.
DeterminismCheck semantic_determinism(const Pattern& p,
                                      const AngleAssignment& a, double tol,
                                      int signal_bound = 12);

enum class Verdict { ProvedDeterministic, NotUniformlyDeterministic, Unknown };
enum class Method { FlowRewrite, SemanticFallback };

std::string to_string(Verdict v);
std::string to_string(Method m);

struct VerifyOptions {
  double tol = 1e-9;
  std::vector<double> probes;  // numeric probes for symbolic angles
  int signal_bound = 12;

  VerifyOptions();
};

struct DeterminismReport {
  Verdict verdict = Verdict::Unknown;
  Method method = Method::SemanticFallback;
  std::optional<RewriteTrace> trace;    // flow-rewrite proof object
  std::optional<Diagram> initial;       // diagram the trace replays from
  std::optional<Diagram> final;         // unconditional result of the proof
  std::optional<std::pair<Valuation, Valuation>> witness;
  std::optional<Diagram> residual;      // conditional leftovers, if blocked
  std::optional<Flow> flow;
  std::string detail;

  Json to_json() const;
};

/// Standardizes, translates and fuses the pattern; with a causal flow,
/// pushes each measurement error along its corrector placement in flow
/// order; falls back to branch-map comparison otherwise.
DeterminismReport verify_determinism(const Pattern& p,
                                     const VerifyOptions& opt = {});

/// The geometry diagram decorated with the pattern's measurements and
/// corrections; reachable from to_diagram(p) by spider fusion.
Diagram diagram_star(const Pattern& p);

/// One extracted circuit operation; `wire` labels carry the first qubit of
/// the flow path they act on.
struct GateOp {
  std::string name;  // "H", "RZ", "CZ", "CX"
  int wire1 = 0;
  int wire2 = 0;          // two-qubit gates
  PhaseExpr phase;        // RZ only

  std::string to_text() const;
};

/// Per-path gate sequence computing the positive branch of a flow-proved
/// deterministic pattern.  With `strict_cx`, CZ gates are rewritten to CX
/// conjugated by Hadamards.
std::vector<GateOp> extract_circuit(const Pattern& p, bool strict_cx = false);

/// Wires of the extracted circuit in order (chain start qubits).
std::vector<int> circuit_wires(const Pattern& p);

/// Builds the diagram of a gate list over the given wires; non-input wires
/// are prepared in the |+> state, and outputs are ordered to match the
/// pattern's sorted output qubits.
Diagram circuit_to_diagram(const Pattern& p, const std::vector<GateOp>& gates);

std::string gates_to_text(const std::vector<GateOp>& gates);

}  // namespace zx
