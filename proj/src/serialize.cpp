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

#include "zx/serialize.hpp"

#include <algorithm>
#include <sstream>

namespace zx {

namespace {

std::string kind_code(VertexType t) {
  switch (t) {
    case VertexType::Z: return "Z";
    case VertexType::X: return "X";
    case VertexType::H: return "H";
    default: return "B";
  }
}

VertexType kind_from_code(const std::string& s) {
  if (s == "Z") return VertexType::Z;
  if (s == "X") return VertexType::X;
  if (s == "H") return VertexType::H;
  if (s == "B") return VertexType::Boundary;
  throw DiagramError("unknown vertex kind: " + s);
}

}  // namespace

Json to_json(const PhaseExpr& p) {
  Json j;
  j["pi"] = Json::array({p.pi_num(), p.pi_den()});
  Json syms = Json::array();
  for (const auto& [name, coeff] : p.sym_part())
    syms.push_back(Json::array({name, coeff}));
  j["sym"] = std::move(syms);
  return j;
}

PhaseExpr phase_from_json(const Json& j) {
  PhaseExpr p = PhaseExpr::rational(j.at("pi").at(0).get<std::int64_t>(),
                                    j.at("pi").at(1).get<std::int64_t>());
  if (j.contains("sym"))
    for (const auto& term : j.at("sym"))
      p = p + PhaseExpr::symbol(term.at(0).get<std::string>(),
                                term.at(1).get<std::int64_t>());
  return p;
}

Json to_json(const Valuation& v) {
  Json j = Json::object();
  for (const auto& [s, b] : v.bits()) j[s] = b;
  return j;
}

Valuation valuation_from_json(const Json& j) {
  Valuation v;
  for (const auto& [key, val] : j.items()) v.set(key, val.get<int>());
  return v;
}

Json to_json(const Diagram& d) {
  Json j;
  j["inputs"] = d.inputs();
  j["outputs"] = d.outputs();
  Json verts = Json::array();
  for (const auto& [id, k] : d.vertices()) {
    Json v;
    v["id"] = id;
    v["kind"] = kind_code(k.type);
    v["phase"] = to_json(k.phase);
    v["cond"] = k.cond.signals();
    verts.push_back(std::move(v));
  }
  j["vertices"] = std::move(verts);
  auto edges = d.edges();
  std::sort(edges.begin(), edges.end());
  Json es = Json::array();
  for (const auto& [u, v] : edges) es.push_back(Json::array({u, v}));
  j["edges"] = std::move(es);
  return j;
}

Diagram diagram_from_json(const Json& j) {
  Diagram d;
  std::map<VertexId, VertexId> remap;
  for (const auto& v : j.at("vertices")) {
    VertexId given = v.at("id").get<VertexId>();
    VertexType t = kind_from_code(v.at("kind").get<std::string>());
    PhaseExpr phase;
    ConditionSet cond;
    if (v.contains("phase")) phase = phase_from_json(v.at("phase"));
    if (v.contains("cond"))
      cond = ConditionSet(v.at("cond").get<std::vector<std::string>>());
    VertexKind kind = (t == VertexType::Z || t == VertexType::X)
                          ? VertexKind::spider(t, phase, cond)
                          : VertexKind{t, {}, {}};
    remap[given] = d.add_vertex(kind);
  }
  auto lookup = [&](VertexId raw) {
    auto it = remap.find(raw);
    if (it == remap.end())
      throw DiagramError("diagram JSON references unknown vertex " +
                         std::to_string(raw));
    return it->second;
  };
  for (const auto& e : j.at("edges"))
    d.add_edge(lookup(e.at(0).get<VertexId>()), lookup(e.at(1).get<VertexId>()));
  // Boundary lists are rebuilt in file order.
  for (const auto& b : j.at("inputs")) d.mark_input(lookup(b.get<VertexId>()));
  for (const auto& b : j.at("outputs")) d.mark_output(lookup(b.get<VertexId>()));
  d.require_valid("diagram JSON");
  return d;
}

std::string to_dot(const Diagram& d) {
  std::ostringstream os;
  os << "graph zx {\n  rankdir=LR;\n";
  for (const auto& [id, k] : d.vertices()) {
    os << "  v" << id << " [";
    switch (k.type) {
      case VertexType::Z:
        os << "shape=ellipse,style=filled,fillcolor=green";
        break;
      case VertexType::X:
        os << "shape=ellipse,style=filled,fillcolor=red";
        break;
      case VertexType::H:
        os << "shape=square,style=filled,fillcolor=yellow";
        break;
      case VertexType::Boundary:
        os << "shape=point";
        break;
    }
    if (k.is_spider()) {
      std::string label = k.phase.is_zero() ? "" : k.phase.to_string();
      if (!k.cond.empty()) label += " " + k.cond.to_string();
      os << ",label=\"" << label << "\"";
    }
    os << "];\n";
  }
  auto edges = d.edges();
  std::sort(edges.begin(), edges.end());
  for (const auto& [u, v] : edges) os << "  v" << u << " -- v" << v << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace zx
