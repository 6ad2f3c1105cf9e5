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

#include "zx/verify.hpp"

#include <algorithm>

namespace zx {

VerifyOptions::VerifyOptions() : probes(default_angle_probes()) {}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::ProvedDeterministic: return "proved-deterministic";
    case Verdict::NotUniformlyDeterministic: return "not-uniformly-deterministic";
    case Verdict::Unknown: return "unknown";
  }
  return "unknown";
}

std::string to_string(Method m) {
  return m == Method::FlowRewrite ? "flow-rewrite" : "semantic-fallback";
}

// ---------------------------------------------------------------------------
// branch maps and semantic determinism
// ---------------------------------------------------------------------------

BranchMaps branch_maps(const Pattern& p, const AngleAssignment& a) {
  require_wellformed(p);
  const Diagram d = to_diagram(p).diagram;
  BranchMaps out;
  out.signals = d.signal_set();
  for (const auto& v : Valuation::enumerate(out.signals)) {
    EvalResult parts = eval_parts(d.apply_valuation(v), a);
    out.branches.emplace_back(v, parts.total());
  }
  return out;
}

namespace {

double scaled_gap(const DenseOperator& a, const DenseOperator& b) {
  const double amax = a.cwiseAbs().maxCoeff();
  const double bmax = b.cwiseAbs().maxCoeff();
  if (amax == 0.0 || bmax == 0.0) return std::max(amax, bmax) == 0.0 ? 0.0 : 1.0;
  DenseOperator an = a / amax, bn = b / bmax;
  std::int64_t r = 0, c = 0;
  bn.cwiseAbs().maxCoeff(&r, &c);
  const Complex lambda = an(r, c) / bn(r, c);
  return (an - lambda * bn).cwiseAbs().maxCoeff();
}

}  // namespace

DeterminismCheck semantic_determinism(const Pattern& p,
                                      const AngleAssignment& a, double tol,
                                      int signal_bound) {
  require_wellformed(p);
  {
    const Diagram d = to_diagram(p).diagram;
    if (static_cast<int>(d.signal_set().size()) > signal_bound)
      throw FlowError("signal count exceeds the configured bound");
  }
  BranchMaps maps = branch_maps(p, a);
  DeterminismCheck check;
  check.deterministic = true;
  const DenseOperator& positive = maps.positive();
  for (std::size_t i = 1; i < maps.branches.size(); ++i) {
    if (equal_up_to_scalar(maps.branches[i].second, positive, tol)) continue;
    check.deterministic = false;
    check.witness = {maps.branches.front().first, maps.branches[i].first};
    check.gap = scaled_gap(maps.branches[i].second, positive);
    break;
  }
  return check;
}

// ---------------------------------------------------------------------------
// verify_determinism
// ---------------------------------------------------------------------------

namespace {

// Walks from `start` away from `from`, over degree-2 vertices, and reports
// the first spider of degree >= 3 (nullopt at an H vertex, boundary, or
// chain end).
std::optional<VertexId> walk_to_spider(const Diagram& d, VertexId from,
                                       VertexId start) {
  VertexId prev = from, cur = start;
  for (int hops = 0; hops < 1024; ++hops) {
    if (!d.has_vertex(cur)) return std::nullopt;
    const VertexKind& k = d.kind(cur);
    if (k.type == VertexType::H || k.type == VertexType::Boundary)
      return std::nullopt;
    if (d.degree(cur) >= 3) return cur;
    auto ns = d.neighbours(cur);
    if (ns.size() != 2) return std::nullopt;  // dead end
    VertexId next = ns[0] == prev ? ns[1] : ns[0];
    prev = cur;
    cur = next;
  }
  return std::nullopt;
}

// Representative spider of each qubit's wire region in the fused diagram.
std::map<int, VertexId> wire_spiders(const Diagram& d, const Translation& t,
                                     const Pattern& p) {
  std::map<int, VertexId> rep;
  for (const auto& [q, err] : t.measure_error) {
    if (!d.has_vertex(err)) continue;
    auto eff = t.measure_effect.at(q);
    for (VertexId n : d.neighbours(err)) {
      if (n == eff) continue;
      if (auto s = walk_to_spider(d, err, n)) rep[q] = *s;
    }
  }
  for (int q : p.outputs) {
    VertexId b = t.output_boundary.at(q);
    if (!d.has_vertex(b)) continue;
    auto ns = d.neighbours(b);
    if (ns.size() != 1) continue;
    if (auto s = walk_to_spider(d, b, ns[0])) rep[q] = *s;
  }
  return rep;
}

// Locates the qubit region a parked conditional vertex sits in, by walking
// both directions to a known anchor (effect, boundary, or wire spider).
std::optional<int> region_of(const Diagram& d, const Translation& t,
                             const std::map<int, VertexId>& rep, VertexId v) {
  std::map<VertexId, int> anchor;
  for (const auto& [q, id] : t.measure_effect) anchor[id] = q;
  for (const auto& [q, id] : t.output_boundary) anchor[id] = q;
  for (const auto& [q, id] : t.input_boundary) anchor[id] = q;
  for (const auto& [q, id] : rep) anchor[id] = q;

  for (VertexId start : d.neighbours(v)) {
    VertexId prev = v, cur = start;
    for (int hops = 0; hops < 1024; ++hops) {
      if (auto it = anchor.find(cur); it != anchor.end()) return it->second;
      if (!d.has_vertex(cur) || d.degree(cur) != 2) break;
      auto ns = d.neighbours(cur);
      if (ns.size() != 2) break;
      VertexId next = ns[0] == prev ? ns[1] : ns[0];
      prev = cur;
      cur = next;
    }
  }
  return std::nullopt;
}

void extend_trace(RewriteTrace& into, const RewriteTrace& from) {
  into.steps.insert(into.steps.end(), from.steps.begin(), from.steps.end());
}

}  // namespace

DeterminismReport verify_determinism(const Pattern& input,
                                     const VerifyOptions& opt) {
  require_wellformed(input);
  const Pattern p = standardize(input);
  DeterminismReport report;

  Translation trans = to_diagram(p);
  auto [d, trace] = simplify(trans.diagram, Strategy::Fuse);
  report.initial = trans.diagram;

  OpenGraph g = geometry(p);
  std::optional<Flow> flow = find_flow(g);
  report.flow = flow;

  bool flow_proof = false;
  if (flow) {
    const auto rep = wire_spiders(d, trans, p);
    std::vector<int> topo_measured;
    for (int v : flow->topological(g))
      if (!g.outputs.count(v)) topo_measured.push_back(v);

    std::map<int, std::vector<VertexId>> pending;
    for (int q : topo_measured)
      if (auto it = trans.measure_error.find(q); it != trans.measure_error.end())
        pending[q].push_back(it->second);

    bool blocked = false;
    for (std::size_t qi = 0; qi < topo_measured.size(); ++qi) {
      const int q = topo_measured[qi];
      std::optional<VertexId> hint;
      if (auto it = rep.find(flow->f.at(q)); it != rep.end()) hint = it->second;
      for (std::size_t vi = 0; vi < pending[q].size(); ++vi) {
        VertexId v = pending[q][vi];
        if (!d.has_vertex(v)) continue;
        PushResult res = push_error(d, v, hint);
        if (!res.progress) {
          blocked = true;
          continue;
        }
        d = std::move(res.diagram);
        extend_trace(trace, res.trace);
        for (VertexId pv : res.parked) {
          if (!d.has_vertex(pv)) continue;
          auto region = region_of(d, trans, rep, pv);
          // A leftover Z error at a later measured qubit is deferred: it is
          // handled like an error of that measurement, corrected at its own
          // flow successor.  X errors cannot be deferred.
          bool deferred = false;
          if (region && d.kind(pv).type == VertexType::Z) {
            auto later = std::find(topo_measured.begin() + static_cast<long>(qi) + 1,
                                   topo_measured.end(), *region);
            if (later != topo_measured.end()) {
              pending[*region].push_back(pv);
              deferred = true;
            }
          }
          if (!deferred) blocked = true;
        }
      }
    }
    if (!blocked && d.is_unconditional()) {
      d.require_valid("flow-rewrite result");
      report.verdict = Verdict::ProvedDeterministic;
      report.method = Method::FlowRewrite;
      report.trace = trace;
      report.final = d;
      report.detail = "all conditional vertices removed along the flow order";
      flow_proof = true;
    } else {
      report.residual = d;
    }
  }

  if (!flow_proof) {
    // Semantic fallback at every angle probe.
    std::vector<std::string> vars = trans.diagram.angle_variables();
    std::vector<AngleAssignment> assignments;
    if (vars.empty()) {
      assignments.push_back({});
    } else {
      for (double probe : opt.probes) {
        AngleAssignment a;
        int idx = 0;
        for (const auto& name : vars) a[name] = probe + 0.37 * idx++;
        assignments.push_back(std::move(a));
      }
      if (assignments.empty())
        throw FlowError("symbolic angles need at least one probe");
    }
    try {
      bool all_ok = true;
      for (const auto& a : assignments) {
        DeterminismCheck check = semantic_determinism(p, a, opt.tol,
                                                      opt.signal_bound);
        if (!check.deterministic) {
          report.verdict = Verdict::NotUniformlyDeterministic;
          report.method = Method::SemanticFallback;
          report.witness = check.witness;
          report.detail = "branch maps differ (max-norm gap " +
                          std::to_string(check.gap) + " after scaling)";
          all_ok = false;
          break;
        }
      }
      if (all_ok) {
        report.verdict = Verdict::ProvedDeterministic;
        report.method = Method::SemanticFallback;
        report.detail = flow ? "residual conditionals, but all branch maps "
                               "agree at every probe"
                             : "no flow, but all branch maps agree at every "
                               "probe";
      }
    } catch (const FlowError& e) {
      report.verdict = Verdict::Unknown;
      report.method = Method::SemanticFallback;
      report.detail = e.what();
    }
  }
  return report;
}

Json DeterminismReport::to_json() const {
  Json j;
  j["verdict"] = to_string(verdict);
  j["method"] = to_string(method);
  j["detail"] = detail;
  if (flow) j["flow"] = zx::to_json(*flow);
  if (trace) j["trace"] = trace->to_json();
  if (witness)
    j["witness"] = Json::array(
        {zx::to_json(witness->first), zx::to_json(witness->second)});
  if (residual) j["residual"] = zx::to_json(*residual);
  return j;
}

// ---------------------------------------------------------------------------
// starred geometry diagram
// ---------------------------------------------------------------------------

Diagram diagram_star(const Pattern& p) {
  require_wellformed(p);
  if (!is_standard_form(p))
    throw DiagramError("diagram_star requires a standard-form pattern");
  GeometryDiagram gd = diagram_of_geometry(geometry(p));
  Diagram& d = gd.diagram;

  std::map<int, VertexId> attach;  // insertion point on each output wire
  for (int q : p.outputs) attach[q] = gd.vertex_of.at(q);

  for (const auto& c : p.commands) {
    switch (c.kind) {
      case Command::Kind::Measure: {
        VertexId at = gd.vertex_of.at(c.qubit);
        auto grow = [&](const VertexKind& k) {
          VertexId v = d.add_vertex(k);
          d.add_edge(at, v);
          at = v;
        };
        if (!c.s_set.empty()) grow(VertexKind::x(PhaseExpr::pi(), c.s_set));
        if (!c.t_set.empty()) grow(VertexKind::z(PhaseExpr::pi(), c.t_set));
        grow(VertexKind::z(PhaseExpr::pi(),
                           ConditionSet::single(Pattern::signal_of(c.qubit))));
        grow(VertexKind::z(-c.angle));
        break;
      }
      case Command::Kind::CorrectX:
      case Command::Kind::CorrectZ: {
        const VertexKind k =
            c.kind == Command::Kind::CorrectX
                ? VertexKind::x(PhaseExpr::pi(), c.domain)
                : VertexKind::z(PhaseExpr::pi(), c.domain);
        VertexId out_b = gd.output_boundary.at(c.qubit);
        VertexId v = d.add_vertex(k);
        d.remove_edge(attach.at(c.qubit), out_b);
        d.add_edge(attach.at(c.qubit), v);
        d.add_edge(v, out_b);
        attach[c.qubit] = v;
        break;
      }
      default:
        break;
    }
  }
  d.require_valid("starred geometry diagram");
  return d;
}

// ---------------------------------------------------------------------------
// circuit extraction
// ---------------------------------------------------------------------------

std::string GateOp::to_text() const {
  if (name == "RZ")
    return "RZ " + std::to_string(wire1) + " " + phase.to_string();
  if (name == "H") return "H " + std::to_string(wire1);
  return name + " " + std::to_string(wire1) + " " + std::to_string(wire2);
}

std::string gates_to_text(const std::vector<GateOp>& gates) {
  std::string out;
  for (const auto& g : gates) out += g.to_text() + "\n";
  return out;
}

namespace {

struct ChainData {
  std::vector<std::vector<int>> chains;      // flow paths, source first
  std::map<int, int> wire_of;                // qubit -> chain start qubit
  std::map<int, int> pred;                   // previous qubit on the chain
};

ChainData flow_chains(const OpenGraph& g, const Flow& fl) {
  ChainData out;
  std::set<int> has_pred;
  for (const auto& [u, v] : fl.f) has_pred.insert(v);
  for (int start : g.vertices) {
    if (has_pred.count(start)) continue;
    std::vector<int> chain = {start};
    int cur = start;
    while (true) {
      auto it = fl.f.find(cur);
      if (it == fl.f.end()) break;
      out.pred[it->second] = cur;
      cur = it->second;
      chain.push_back(cur);
    }
    out.chains.push_back(chain);
  }
  std::sort(out.chains.begin(), out.chains.end());
  for (const auto& chain : out.chains)
    for (int q : chain) out.wire_of[q] = chain.front();
  return out;
}

}  // namespace

std::vector<int> circuit_wires(const Pattern& p) {
  OpenGraph g = geometry(standardize(p));
  auto flow = find_flow(g);
  if (!flow) throw FlowError("extract_circuit requires a causal flow");
  std::vector<int> wires;
  for (const auto& chain : flow_chains(g, *flow).chains)
    wires.push_back(chain.front());
  return wires;
}

std::vector<GateOp> extract_circuit(const Pattern& input, bool strict_cx) {
  DeterminismReport report = verify_determinism(input);
  if (report.verdict != Verdict::ProvedDeterministic ||
      report.method != Method::FlowRewrite)
    throw FlowError(
        "extract_circuit requires a flow-rewrite determinism proof");
  const Pattern p = standardize(input);
  OpenGraph g = geometry(p);
  const Flow& fl = *report.flow;
  ChainData chains = flow_chains(g, fl);

  std::map<int, PhaseExpr> angle;
  for (const auto& c : p.commands)
    if (c.kind == Command::Kind::Measure) angle[c.qubit] = c.angle;

  // Events: one measurement step per measured qubit, one CZ per geometry
  // edge that is not a flow path edge.  Constraints keep every gate between
  // the steps of the wire positions it touches.
  struct Event {
    bool is_cz;
    int q1, q2;  // J: q1; CZ: edge {q1, q2}
  };
  std::vector<Event> events;
  std::map<int, std::size_t> j_index;
  for (int v : g.vertices) {
    if (g.outputs.count(v)) continue;
    j_index[v] = events.size();
    events.push_back({false, v, 0});
  }
  std::set<std::pair<int, int>> path_edges;
  for (const auto& [u, v] : fl.f)
    path_edges.insert({std::min(u, v), std::max(u, v)});
  std::vector<std::size_t> cz_events;
  for (const auto& [u, v] : g.edges) {
    if (path_edges.count({u, v})) continue;
    cz_events.push_back(events.size());
    events.push_back({true, u, v});
  }

  std::vector<std::set<std::size_t>> before(events.size());
  auto add_constraint = [&](std::size_t a, std::size_t b) {
    before[b].insert(a);  // a must precede b
  };
  for (const auto& [v, pred] : chains.pred) {
    if (j_index.count(v) && j_index.count(pred))
      add_constraint(j_index[pred], j_index[v]);
  }
  for (std::size_t ce : cz_events) {
    for (int q : {events[ce].q1, events[ce].q2}) {
      if (j_index.count(q)) add_constraint(ce, j_index[q]);
      auto it = chains.pred.find(q);
      if (it != chains.pred.end() && j_index.count(it->second))
        add_constraint(j_index[it->second], ce);
    }
  }

  std::vector<GateOp> gates;
  std::vector<bool> done(events.size(), false);
  std::size_t emitted = 0;
  while (emitted < events.size()) {
    // Ready CZ gates first, then the lowest-qubit measurement step.
    std::size_t pick = events.size();
    for (std::size_t i = 0; i < events.size(); ++i) {
      if (done[i]) continue;
      bool ready = std::all_of(before[i].begin(), before[i].end(),
                               [&](std::size_t a) { return done[a]; });
      if (!ready) continue;
      if (pick == events.size() || (events[i].is_cz && !events[pick].is_cz))
        pick = i;
    }
    if (pick == events.size())
      throw FlowError("extract_circuit: cyclic gate constraints");
    const Event& ev = events[pick];
    if (ev.is_cz) {
      gates.push_back(
          {"CZ", chains.wire_of.at(ev.q1), chains.wire_of.at(ev.q2), {}});
    } else {
      const PhaseExpr a = angle.at(ev.q1);
      const int wire = chains.wire_of.at(ev.q1);
      if (!a.is_zero()) gates.push_back({"RZ", wire, 0, -a});
      gates.push_back({"H", wire, 0, {}});
    }
    done[pick] = true;
    ++emitted;
  }

  if (strict_cx) {
    std::vector<GateOp> out;
    for (const auto& gt : gates) {
      if (gt.name == "CZ") {
        out.push_back({"H", gt.wire2, 0, {}});
        out.push_back({"CX", gt.wire1, gt.wire2, {}});
        out.push_back({"H", gt.wire2, 0, {}});
      } else {
        out.push_back(gt);
      }
    }
    return out;
  }
  return gates;
}

Diagram circuit_to_diagram(const Pattern& input, const std::vector<GateOp>& gates) {
  const Pattern p = standardize(input);
  OpenGraph g = geometry(p);
  auto flow = find_flow(g);
  if (!flow) throw FlowError("circuit_to_diagram requires a causal flow");
  ChainData chains = flow_chains(g, *flow);

  Diagram d;
  std::map<int, VertexId> attach;
  for (const auto& chain : chains.chains) {
    const int wire = chain.front();
    if (p.inputs.count(wire)) {
      attach[wire] = d.add_input();
    } else {
      attach[wire] = d.add_vertex(VertexKind::z());  // |+> preparation
    }
  }
  auto append = [&](int wire, const VertexKind& k) {
    VertexId v = d.add_vertex(k);
    d.add_edge(attach.at(wire), v);
    attach[wire] = v;
    return v;
  };
  for (const auto& gt : gates) {
    if (gt.name == "H") {
      append(gt.wire1, VertexKind::h());
    } else if (gt.name == "RZ") {
      append(gt.wire1, VertexKind::z(gt.phase));
    } else if (gt.name == "CZ") {
      VertexId z1 = append(gt.wire1, VertexKind::z());
      VertexId z2 = append(gt.wire2, VertexKind::z());
      VertexId h = d.add_vertex(VertexKind::h());
      d.add_edge(z1, h);
      d.add_edge(h, z2);
    } else if (gt.name == "CX") {
      VertexId zc = append(gt.wire1, VertexKind::z());
      VertexId xt = append(gt.wire2, VertexKind::x());
      d.add_edge(zc, xt);
    } else {
      throw FlowError("unknown gate in circuit: " + gt.name);
    }
  }
  // Outputs in ascending pattern-output order.
  std::map<int, int> wire_of_output;
  for (const auto& chain : chains.chains) wire_of_output[chain.back()] = chain.front();
  for (int q : p.outputs) {
    VertexId b = d.add_output();
    d.add_edge(attach.at(wire_of_output.at(q)), b);
  }
  d.require_valid("extracted circuit diagram");
  return d;
}

}  // namespace zx
