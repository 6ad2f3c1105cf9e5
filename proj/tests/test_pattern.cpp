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

#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "support/statevec.hpp"
#include "zx/eval.hpp"
#include "zx/pattern.hpp"
#include "zx/verify.hpp"

using namespace zx;

namespace {

std::string read_corpus(const std::string& name) {
  const char* dir = std::getenv("ZXVERIFY_CORPUS");
  REQUIRE(dir != nullptr);
  std::ifstream in(std::string(dir) + "/" + name);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

const char* kCxPattern = "cx.mc";

}  // namespace

TEST_CASE("parsing the CNOT pattern") {
  Pattern p = parse_pattern(read_corpus(kCxPattern));
  CHECK(p.commands.size() == 10);
  CHECK(p.inputs == std::set<int>{1, 2});
  CHECK(p.outputs == std::set<int>{1, 4});
  CHECK(p.qubits == std::set<int>{1, 2, 3, 4});
  CHECK(check_wellformed(p).empty());
  CHECK(is_standard_form(p));
}

TEST_CASE("empty body parses to the all-input all-output pattern") {
  Pattern p = parse_pattern("");
  CHECK(p.qubits.empty());
  CHECK(p.commands.empty());
  CHECK(check_wellformed(p).empty());

  Pattern wire = parse_pattern("inputs: 1; outputs: 1;\n");
  CHECK(wire.qubits == std::set<int>{1});
  CHECK(check_wellformed(wire).empty());
  CHECK(to_diagram(wire).diagram.edges().size() == 1);
}

TEST_CASE("parse errors carry line and column") {
  // Duplicate initialisation.
  try {
    parse_pattern("N 1\nN 1\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
  // Entangling an already measured qubit.
  CHECK_THROWS_AS(parse_pattern("N 1\nN 2\nM 1 0\nE 1 2\n"), ParseError);
  CHECK_THROWS_AS(parse_pattern("Q 1\n"), ParseError);
  CHECK_THROWS_AS(parse_pattern("E 1 1\n"), ParseError);
  CHECK_THROWS_AS(parse_pattern("M 1 banana/pi\n"), ParseError);
  // A second measurement parses but fails well-formedness.
  Pattern p = parse_pattern("inputs: 1; outputs: ;\nM 1 0\nM 1 0\n");
  CHECK_FALSE(check_wellformed(p).empty());
}

TEST_CASE("print-parse round-trip is the identity on ASTs") {
  for (const char* name :
       {"hadamard.mc", "cx.mc", "teleport.mc", "nflow.mc", "nonuniform.mc"}) {
    CAPTURE(name);
    Pattern p = parse_pattern(read_corpus(name));
    std::string canon = print_pattern(p);
    CHECK(parse_pattern(canon) == p);
    // print . parse is the identity on canonical text.
    CHECK(print_pattern(parse_pattern(canon)) == canon);
  }
  // The empty pattern round-trips too.
  Pattern empty;
  CHECK(parse_pattern(print_pattern(empty)) == empty);
}

TEST_CASE("well-formedness catches out-of-order and unknown signals") {
  // Signal used before the measurement that produces it.
  Pattern p = parse_pattern("inputs: 1,2; outputs: 2;\nX 2 {1}\nM 1 0\n");
  auto bad = check_wellformed(p);
  REQUIRE_FALSE(bad.empty());
  CHECK(bad.front().find("condition 3") != std::string::npos);

  // Command after a measurement on the same qubit.
  Pattern q = parse_pattern("inputs: 1; outputs: ;\nM 1 0\nZ 1 {1}\n");
  bad = check_wellformed(q);
  REQUIRE_FALSE(bad.empty());
  CHECK(bad.front().find("condition 2") != std::string::npos);

  // Initialisation not first.
  Pattern r = parse_pattern("inputs: 1; outputs: 1,2;\nE 1 2\nN 2\n");
  bad = check_wellformed(r);
  REQUIRE_FALSE(bad.empty());
  CHECK(bad.front().find("condition 1") != std::string::npos);
}

TEST_CASE("geometry follows the entangling commands") {
  Pattern cx = parse_pattern(read_corpus(kCxPattern));
  OpenGraph g = geometry(cx);
  CHECK(g.vertices == std::set<int>{1, 2, 3, 4});
  CHECK(g.edges == std::set<std::pair<int, int>>{{1, 3}, {2, 3}, {3, 4}});
  CHECK(g.inputs == std::set<int>{1, 2});
  CHECK(g.outputs == std::set<int>{1, 4});

  Pattern nf = parse_pattern(read_corpus("nflow.mc"));
  OpenGraph gn = geometry(nf);
  CHECK(gn.edges == std::set<std::pair<int, int>>{{1, 2}, {2, 3}});
  CHECK(gn.inputs == std::set<int>{1});
  CHECK(gn.outputs == std::set<int>{1});

  Pattern none = parse_pattern("inputs: 1,2; outputs: 1,2;\n");
  CHECK(geometry(none).edges.empty());
}

TEST_CASE("translation produces one signal per measurement") {
  Pattern p = parse_pattern(read_corpus("teleport.mc"));
  Translation t = to_diagram(p);
  CHECK(t.diagram.validate().empty());
  CHECK(t.diagram.signal_set() == std::vector<std::string>{"1", "2"});
  CHECK(t.measure_error.size() == 2);
  // A lone initialisation translates to a single-vertex 0 -> 1 diagram.
  Pattern n1 = parse_pattern("inputs: ; outputs: 1;\nN 1\n");
  Translation t1 = to_diagram(n1);
  DenseOperator m = eval_matrix(t1.diagram);
  REQUIRE(m.rows() == 2);
  CHECK(m(0, 0).real() == doctest::Approx(1.0));
  CHECK(m(1, 0).real() == doctest::Approx(1.0));  // sqrt(2)|+>
}

namespace {

// Superoperator of a pattern over its measurement signals, as a Choi matrix.
DenseOperator pattern_choi(const Pattern& p, const AngleAssignment& a) {
  const Diagram d = to_diagram(p).diagram;
  return eval_superop(d, a).choi();
}

}  // namespace

TEST_CASE("standardize reorders and preserves the channel") {
  // An X correction before an entangling command moves behind it, emitting
  // the partner Z correction on the other qubit.
  Pattern p = parse_pattern(
      "inputs: 1,2,3; outputs: 2,3;\nM 1 0\nX 2 {1}\nE 2 3\n");
  REQUIRE(check_wellformed(p).empty());
  Pattern s = standardize(p);
  CHECK(is_standard_form(s));
  REQUIRE(s.commands.size() == 4);
  CHECK(s.commands[0].kind == Command::Kind::Entangle);
  CHECK(s.commands[1].kind == Command::Kind::Measure);
  CHECK(s.commands[2] == Command::correct_z(3, ConditionSet({"1"})));
  CHECK(s.commands[3] == Command::correct_x(2, ConditionSet({"1"})));

  for (double probe : default_angle_probes()) {
    AngleAssignment a{{"alpha", probe}};
    CHECK(equal_up_to_scalar(pattern_choi(p, a), pattern_choi(s, a), 1e-9));
  }
}

TEST_CASE("standardize expands conditional measurements") {
  Pattern p = parse_pattern(
      "inputs: 1,2; outputs: 2;\nE 1 2\nM 1 0\nM 2 alpha s={1} t={1}\n");
  // Make qubit 2 an output-free measured qubit: adjust to a 3-qubit case.
  p = parse_pattern(
      "inputs: 1,2; outputs: ;\nE 1 2\nM 1 0\nM 2 alpha s={1} t={1}\n");
  REQUIRE(check_wellformed(p).empty());
  Pattern s = standardize(p);
  CHECK(is_standard_form(s));
  // The conditional measurement becomes X, Z, then a plain measurement.
  REQUIRE(s.commands.size() == 5);
  CHECK(s.commands[2] == Command::correct_x(2, ConditionSet({"1"})));
  CHECK(s.commands[3] == Command::correct_z(2, ConditionSet({"1"})));
  CHECK(s.commands[4].kind == Command::Kind::Measure);
  CHECK(s.commands[4].s_set.empty());
  CHECK(s.commands[4].t_set.empty());

  for (double probe : default_angle_probes()) {
    AngleAssignment a{{"alpha", probe}};
    CHECK(equal_up_to_scalar(pattern_choi(p, a), pattern_choi(s, a), 1e-9));
  }

  // Already-standard patterns are unchanged.
  Pattern cx = parse_pattern(read_corpus(kCxPattern));
  CHECK(standardize(cx) == cx);
}

TEST_CASE("commutation identities used by standardize hold numerically") {
  // E X_1 = X_1 Z_2 E and E Z_1 = Z_1 E on two qubits.
  DenseOperator cz = eval_matrix(gate(GateName::CZ));
  DenseOperator x = eval_matrix(gate(GateName::Xphase, PhaseExpr::pi()));
  DenseOperator z = eval_matrix(gate(GateName::Zphase, PhaseExpr::pi()));
  DenseOperator id = DenseOperator::Identity(2, 2);
  CHECK(equal_up_to_scalar(cz * kron(x, id), kron(x, z) * cz, 1e-12));
  CHECK(equal_up_to_scalar(cz * kron(z, id), kron(z, id) * cz, 1e-12));
}

TEST_CASE("branch maps agree with straight-line simulation") {
  for (const char* name :
       {"hadamard.mc", "cx.mc", "teleport.mc", "nflow.mc", "nonuniform.mc"}) {
    CAPTURE(name);
    Pattern p = parse_pattern(read_corpus(name));
    AngleAssignment a{{"alpha", 1.0}};
    BranchMaps maps = branch_maps(p, a);
    for (const auto& [valuation, diagram_map] : maps.branches) {
      DenseOperator direct = zx::testing::simulate_branch(p, valuation, a);
      CAPTURE(valuation.to_string());
      CHECK(equal_up_to_scalar(diagram_map, direct, 1e-9));
    }
  }
}

TEST_CASE("the one-qubit gate pattern computes H on both branches") {
  Pattern p = parse_pattern(read_corpus("hadamard.mc"));
  BranchMaps maps = branch_maps(p);
  REQUIRE(maps.branches.size() == 2);
  DenseOperator h = eval_matrix(gate(GateName::H));
  CHECK(equal_up_to_scalar(maps.branches[0].second, h, 1e-9));
  CHECK(equal_up_to_scalar(maps.branches[1].second, h, 1e-9));
}
