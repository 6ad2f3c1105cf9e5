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

#include "zx/eval.hpp"
#include "zx/pattern.hpp"
#include "zx/rewrite.hpp"

using namespace zx;

namespace {

Diagram two_spider_chain(PhaseExpr a, PhaseExpr b) {
  Diagram d;
  VertexId in = d.add_input();
  VertexId out = d.add_output();
  VertexId u = d.add_vertex(VertexKind::z(std::move(a)));
  VertexId v = d.add_vertex(VertexKind::z(std::move(b)));
  d.add_edge(in, u);
  d.add_edge(u, v);
  d.add_edge(v, out);
  return d;
}

}  // namespace

TEST_CASE("spider fusion sums phases and preserves the matrix") {
  auto alpha = PhaseExpr::rational(1, 3);
  auto beta = PhaseExpr::rational(5, 4);
  Diagram d = two_spider_chain(alpha, beta);
  auto sites = find_matches(d, {Rule::Spider, false});
  REQUIRE(sites.size() == 1);
  DenseOperator before = eval_matrix(d);
  Diagram after = apply(d, sites.front());
  CHECK(after.vertices().size() == d.vertices().size() - 1);
  bool found = false;
  for (const auto& [id, k] : after.vertices())
    if (k.is_spider()) {
      CHECK(k.phase == alpha + beta);
      found = true;
    }
  CHECK(found);
  CHECK(equal_up_to_scalar(eval_matrix(after), before, 1e-12));

  // Conditional spiders fuse only with identical condition sets.
  Diagram c = two_spider_chain(PhaseExpr::pi(), PhaseExpr::pi());
  std::vector<VertexId> spiders;
  for (const auto& [id, k] : c.vertices())
    if (k.is_spider()) spiders.push_back(id);
  c.set_kind(spiders[0], VertexKind::z(PhaseExpr::pi(), ConditionSet({"s"})));
  CHECK(find_matches(c, {Rule::Spider, false}).empty());
  c.set_kind(spiders[1], VertexKind::z(PhaseExpr::pi(), ConditionSet({"s"})));
  auto cond_sites = find_matches(c, {Rule::Spider, false});
  REQUIRE(cond_sites.size() == 1);
  Diagram fused = apply(c, cond_sites.front());
  // pi + pi = 0: the condition set is dropped with the zero phase.
  CHECK(fused.is_unconditional());
}

TEST_CASE("identity and anti-loop matches") {
  Diagram d = two_spider_chain(PhaseExpr::zero(), PhaseExpr::rational(1, 2));
  auto sites = find_matches(d, {Rule::Identity, false});
  REQUIRE(sites.size() == 1);
  Diagram after = apply(d, sites.front());
  CHECK(equal_up_to_scalar(eval_matrix(after), eval_matrix(d), 1e-12));

  Diagram loop;
  VertexId v = loop.add_vertex(VertexKind::z(PhaseExpr::rational(1, 4)));
  loop.add_edge(v, v);
  loop.add_edge(v, loop.add_input());
  loop.add_edge(v, loop.add_output());
  auto loop_sites = find_matches(loop, {Rule::AntiLoop, false});
  REQUIRE(loop_sites.size() == 1);
  Diagram unlooped = apply(loop, loop_sites.front());
  CHECK(unlooped.edge_multiplicity(v, v) == 0);
  CHECK(eval_matrix(unlooped).isApprox(eval_matrix(loop), 1e-12));
}

TEST_CASE("hopf applies to parallel pairs, plain and through H") {
  // Plain form: Z and X joined by exactly two parallel edges.
  Diagram d;
  VertexId u = d.add_vertex(VertexKind::z());
  VertexId v = d.add_vertex(VertexKind::x());
  d.add_edge(u, v);
  d.add_edge(u, v);
  d.add_edge(u, d.add_input());
  d.add_edge(v, d.add_output());
  auto sites = find_matches(d, {Rule::Hopf, false});
  REQUIRE(sites.size() == 1);
  DenseOperator before = eval_matrix(d);
  Diagram after = apply(d, sites.front());
  CHECK(after.edge_multiplicity(u, v) == 0);
  CHECK(equal_up_to_scalar(eval_matrix(after), before, 1e-12));

  // H-path form between two Z spiders.
  Diagram h;
  VertexId a = h.add_vertex(VertexKind::z());
  VertexId b = h.add_vertex(VertexKind::z());
  VertexId h1 = h.add_vertex(VertexKind::h());
  VertexId h2 = h.add_vertex(VertexKind::h());
  h.add_edge(a, h1);
  h.add_edge(h1, b);
  h.add_edge(a, h2);
  h.add_edge(h2, b);
  h.add_edge(a, h.add_input());
  h.add_edge(b, h.add_output());
  auto h_sites = find_matches(h, {Rule::Hopf, false});
  REQUIRE(h_sites.size() == 1);
  DenseOperator hbefore = eval_matrix(h);
  Diagram hafter = apply(h, h_sites.front());
  CHECK(equal_up_to_scalar(eval_matrix(hafter), hbefore, 1e-12));
}

TEST_CASE("pi-commute negates the spider phase") {
  // X(pi) on a wire into Z(alpha): afterwards Z(-alpha) with X(pi) beyond.
  auto alpha = PhaseExpr::rational(1, 3);
  Diagram d;
  VertexId in = d.add_input();
  VertexId out = d.add_output();
  VertexId p = d.add_vertex(VertexKind::x(PhaseExpr::pi()));
  VertexId v = d.add_vertex(VertexKind::z(alpha));
  d.add_edge(in, p);
  d.add_edge(p, v);
  d.add_edge(v, out);
  auto sites = find_matches(d, {Rule::PiCommute, false});
  REQUIRE(sites.size() == 1);
  DenseOperator before = eval_matrix(d);
  Diagram after = apply(d, sites.front());
  CHECK(after.kind(v).phase == -alpha);
  CHECK(equal_up_to_scalar(eval_matrix(after), before, 1e-12));

  // A conditional pi does not cross a spider with a non-Pauli phase.
  d.set_kind(p, VertexKind::x(PhaseExpr::pi(), ConditionSet({"s"})));
  CHECK(find_matches(d, {Rule::PiCommute, false}).empty());
  d.set_kind(v, VertexKind::z(PhaseExpr::pi()));
  CHECK(find_matches(d, {Rule::PiCommute, false}).size() == 1);
}

TEST_CASE("simplify fuses the valuated one-qubit pattern to an H gate") {
  const char* text =
      "inputs: 1; outputs: 2;\nN 2\nE 1 2\nM 1 0\nX 2 {1}\n";
  Diagram d = to_diagram(parse_pattern(text)).diagram;
  Diagram positive = d.apply_valuation(Valuation({{"1", 0}}));
  auto [simple, trace] = simplify(positive, Strategy::Fuse);
  CHECK(Diagram::iso_equal(simple, gate(GateName::H)));
  CHECK_FALSE(trace.steps.empty());
}

TEST_CASE("simplify full reduces the Bell circuit to a cup") {
  Diagram bell = Diagram::compose(zero_state(2), gate(GateName::BellPrep));
  auto [simple, trace] = simplify(bell, Strategy::Full);
  Diagram cup;
  VertexId o1 = cup.add_output();
  VertexId o2 = cup.add_output();
  cup.add_edge(o1, o2);
  CHECK(Diagram::iso_equal(simple, cup));
}

TEST_CASE("simplify full cancels CZ against CZ") {
  Diagram czcz = Diagram::compose(gate(GateName::CZ), gate(GateName::CZ));
  auto [simple, trace] = simplify(czcz, Strategy::Full);
  CHECK(Diagram::iso_equal(simple, identity_diagram(2)));
}

TEST_CASE("simplify is idempotent and preserves the channel") {
  Diagram d = to_diagram(parse_pattern(
      "inputs: 1; outputs: 3;\nN 3\nN 2\nE 1 2\nE 2 3\nM 1 0\nM 2 0\n"
      "Z 3 {1}\nX 3 {2}\n")).diagram;
  auto [once, trace1] = simplify(d, Strategy::Fuse);
  auto [twice, trace2] = simplify(once, Strategy::Fuse);
  CHECK(Diagram::iso_equal(once, twice));
  CHECK(trace2.steps.empty());

  const auto signals = d.signal_set();
  CHECK(superop_equal_up_to_scalar(eval_superop(d, {}, signals),
                                   eval_superop(once, {}, signals), 1e-9));
}

TEST_CASE("traces replay with matching digests and survive JSON") {
  Diagram czcz = Diagram::compose(gate(GateName::CZ), gate(GateName::CZ));
  auto [simple, trace] = simplify(czcz, Strategy::Full);
  Diagram replayed = replay(czcz, trace);
  CHECK(replayed.hash() == simple.hash());

  RewriteTrace back = RewriteTrace::from_json(trace.to_json());
  CHECK(replay(czcz, back).hash() == simple.hash());

  // A stale site is rejected.
  auto sites = find_matches(czcz, {Rule::Spider, false});
  REQUIRE_FALSE(sites.empty());
  Diagram other = apply(czcz, sites.front());
  CHECK_THROWS_AS(apply(other, sites.front()), RewriteError);
}

TEST_CASE("every trace step preserves the superoperator semantics") {
  // Replay a full-strategy trace step by step against the channel oracle.
  Diagram d = to_diagram(parse_pattern(
      "inputs: 1; outputs: 2;\nN 2\nE 1 2\nM 1 alpha\nX 2 {1}\n")).diagram;
  auto [simple, trace] = simplify(d, Strategy::Fuse);
  const auto signals = d.signal_set();
  AngleAssignment a{{"alpha", default_angle_probes()[0]}};
  Diagram current = d;
  for (const auto& step : trace.steps) {
    RewriteTrace one;
    one.steps.push_back(step);
    Diagram next = replay(current, one);
    CHECK(superop_equal_up_to_scalar(eval_superop(current, a, signals),
                                     eval_superop(next, a, signals), 1e-9));
    current = next;
  }
}

TEST_CASE("push_error runs the corrector placement sequence") {
  // Wire with a conditional error meeting its matching corrector.
  Diagram d;
  VertexId in = d.add_input();
  VertexId out = d.add_output();
  VertexId err = d.add_vertex(VertexKind::z(PhaseExpr::pi(), ConditionSet({"s"})));
  VertexId corr = d.add_vertex(VertexKind::z(PhaseExpr::pi(), ConditionSet({"s"})));
  d.add_edge(in, err);
  d.add_edge(err, corr);
  d.add_edge(corr, out);
  PushResult res = push_error(d, err);
  CHECK(res.progress);
  CHECK(res.diagram.is_unconditional());
  CHECK(Diagram::iso_equal(res.diagram, identity_diagram(1)));
  CHECK(replay(d, res.trace).hash() == res.diagram.hash());

  // X(pi,{s}) pushed past a Z(alpha) spider negates the phase.
  Diagram d2;
  VertexId in2 = d2.add_input();
  VertexId out2 = d2.add_output();
  auto alpha = PhaseExpr::zero();  // spider phase must be Pauli for a
                                   // conditional crossing
  VertexId x = d2.add_vertex(VertexKind::x(PhaseExpr::pi(), ConditionSet({"s"})));
  VertexId v = d2.add_vertex(VertexKind::z(alpha));
  VertexId xc = d2.add_vertex(VertexKind::x(PhaseExpr::pi(), ConditionSet({"s"})));
  d2.add_edge(in2, x);
  d2.add_edge(x, v);
  d2.add_edge(v, xc);
  d2.add_edge(xc, out2);
  PushResult res2 = push_error(d2, x);
  CHECK(res2.progress);
  CHECK(res2.diagram.is_unconditional());

  // Blocked configuration: residual unchanged with an empty trace.
  Diagram d3;
  VertexId in3 = d3.add_input();
  VertexId out3 = d3.add_output();
  VertexId lone = d3.add_vertex(VertexKind::z(PhaseExpr::pi(), ConditionSet({"s"})));
  d3.add_edge(in3, lone);
  d3.add_edge(lone, out3);
  PushResult res3 = push_error(d3, lone);
  CHECK_FALSE(res3.progress);
  CHECK(res3.trace.steps.empty());
  CHECK(res3.diagram.hash() == d3.hash());
}

TEST_CASE("full-strategy simplify is idempotent on conditional diagrams") {
  Diagram d = to_diagram(parse_pattern(
      "inputs: 1,2; outputs: 1,4;\nN 4\nN 3\nE 3 4\nE 2 3\nE 1 3\n"
      "M 2 0\nM 3 0\nZ 1 {2}\nZ 4 {2}\nX 4 {3}\n")).diagram;
  auto [once, trace1] = simplify(d, Strategy::Full);
  auto [twice, trace2] = simplify(once, Strategy::Full);
  CHECK(trace2.steps.empty());
  CHECK(Diagram::iso_equal(once, twice));
}

TEST_CASE("pushing an error through a spider emits per-wire correctors") {
  // A conditional Z error facing a phase-free Z spider through an H: the
  // commutation leaves an X(pi) on the spider's continuation and, across
  // each further H leg, a Z(pi) with the same condition set.
  Diagram d;
  VertexId in = d.add_input();
  VertexId err = d.add_vertex(VertexKind::z(PhaseExpr::pi(), ConditionSet({"s"})));
  VertexId h = d.add_vertex(VertexKind::h());
  VertexId spider = d.add_vertex(VertexKind::z());
  d.add_edge(in, err);
  d.add_edge(err, h);
  d.add_edge(h, spider);
  VertexId out1 = d.add_output();
  d.add_edge(spider, out1);  // continuation wire
  VertexId h2 = d.add_vertex(VertexKind::h());
  VertexId neighbour = d.add_vertex(VertexKind::z());
  VertexId out2 = d.add_output();
  d.add_edge(spider, h2);
  d.add_edge(h2, neighbour);
  d.add_edge(neighbour, out2);

  PushResult res = push_error(d, err);
  REQUIRE(res.progress);
  int x_emitted = 0, z_emitted = 0;
  for (const auto& [id, k] : res.diagram.vertices()) {
    if (!k.is_conditional()) continue;
    CHECK(k.cond == ConditionSet({"s"}));
    CHECK(k.phase.is_pi());
    if (k.type == VertexType::X) ++x_emitted;
    if (k.type == VertexType::Z) ++z_emitted;
  }
  CHECK(x_emitted == 1);  // on the continuation wire
  CHECK(z_emitted == 1);  // past the H towards the neighbour
  CHECK(res.parked.size() == 2);

  const auto signals = d.signal_set();
  CHECK(superop_equal_up_to_scalar(eval_superop(d, {}, signals),
                                   eval_superop(res.diagram, {}, signals),
                                   1e-9));
}

TEST_CASE("rule soundness spot checks") {
  for (const RuleId& rule : RuleId::all()) {
    CAPTURE(rule.name());
    SoundnessReport report = check_rule_soundness(rule, 25, 1e-9, 1);
    CHECK(report.failures == 0);
  }
}

TEST_CASE("rule names round-trip") {
  for (const RuleId& r : RuleId::all())
    CHECK(RuleId::from_name(r.name()) == r);
  CHECK_THROWS_AS(RuleId::from_name("nonsense"), RewriteError);
}
