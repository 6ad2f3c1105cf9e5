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
#include <string>
#include <vector>

#include "zx/diagram.hpp"
#include "zx/open_graph.hpp"

namespace zx {

/// Parse failure with a 1-based source position.
struct ParseError : std::runtime_error {
  ParseError(int line, int col, const std::string& msg)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) +
                           ": " + msg),
        line(line),
        col(col) {}
  int line, col;
};

/// One measurement-calculus command.  Commands are stored and executed in
/// list order (first element runs first).
struct Command {
  enum class Kind { Init, Entangle, Measure, CorrectX, CorrectZ };

  Kind kind;
  int qubit = 0;
  int qubit2 = 0;       // Entangle only
  PhaseExpr angle;      // Measure only
  ConditionSet s_set;   // Measure: sign condition
  ConditionSet t_set;   // Measure: pi-offset condition
  ConditionSet domain;  // CorrectX / CorrectZ condition

  static Command init(int q);
  static Command entangle(int q1, int q2);
  static Command measure(int q, PhaseExpr angle, ConditionSet s = {},
                         ConditionSet t = {});
  static Command correct_x(int q, ConditionSet domain);
  static Command correct_z(int q, ConditionSet domain);

  bool operator==(const Command& other) const = default;
};

/// A one-way-model program: qubits, boundary roles, ordered command list.
struct Pattern {
  std::set<int> qubits;
  std::set<int> inputs;   // qubits never initialised
  std::set<int> outputs;  // qubits never measured
  std::vector<Command> commands;

  bool operator==(const Pattern& other) const = default;

  /// Signal name conventions: measuring qubit q yields signal "q".
  static std::string signal_of(int qubit) { return std::to_string(qubit); }
};

/// Parses the line-oriented pattern DSL.  Duplicate initialisations and
/// entangling commands on already-measured qubits are rejected here; other
/// structural conditions are reported by check_wellformed.
Pattern parse_pattern(const std::string& text);

/// Canonical text; parse_pattern(print_pattern(p)) == p.
std::string print_pattern(const Pattern& p);

/// Determinacy conditions and boundary-role consistency; empty means
/// well-formed.  Violations cite the condition and command index.
std::vector<std::string> check_wellformed(const Pattern& p);
void require_wellformed(const Pattern& p);

/// True if commands are ordered: initialisations, then entangling commands,
/// then measurements with their same-qubit pre-corrections, then corrections.
bool is_standard_form(const Pattern& p);

/// Reorders an equivalent pattern into standard form: conditional
/// measurements are expanded into corrections followed by a plain
/// measurement, and entangling commands are commuted ahead of measurements
/// and corrections (an X correction crossing an entangling command emits the
/// partner Z correction).  Preserves the superoperator semantics.
Pattern standardize(const Pattern& p);

/// Pattern-to-diagram translation, with bookkeeping for later analyses.
struct Translation {
  Diagram diagram;
  std::map<int, VertexId> measure_error;   // conditional Z(pi,{q}) vertex
  std::map<int, VertexId> measure_effect;  // trailing effect vertex
  std::map<int, VertexId> input_boundary;
  std::map<int, VertexId> output_boundary;
};

/// Composes the per-command subdiagrams along one wire per qubit.
Translation to_diagram(const Pattern& p);

/// Entanglement graph: qubits as vertices, edges from entangling commands.
OpenGraph geometry(const Pattern& p);

}  // namespace zx
