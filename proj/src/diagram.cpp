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

#include "zx/diagram.hpp"

#include <algorithm>
#include <functional>

#include "zx/serialize.hpp"

namespace zx {

// ---------------------------------------------------------------------------
// ConditionSet / Valuation
// ---------------------------------------------------------------------------

ConditionSet::ConditionSet(std::vector<std::string> signals)
    : signals_(std::move(signals)) {
  std::sort(signals_.begin(), signals_.end());
  signals_.erase(std::unique(signals_.begin(), signals_.end()), signals_.end());
}

bool ConditionSet::contains(const std::string& s) const {
  return std::binary_search(signals_.begin(), signals_.end(), s);
}

std::string ConditionSet::to_string() const {
  std::string out = "{";
  for (std::size_t i = 0; i < signals_.size(); ++i) {
    if (i) out += ",";
    out += signals_[i];
  }
  return out + "}";
}

std::optional<int> Valuation::get(const std::string& signal) const {
  auto it = bits_.find(signal);
  if (it == bits_.end()) return std::nullopt;
  return it->second;
}

bool Valuation::activates(const ConditionSet& cond) const {
  int sum = 0;
  for (const auto& s : cond.signals()) {
    auto bit = get(s);
    if (!bit) throw DiagramError("incomplete valuation: missing signal " + s);
    sum += *bit;
  }
  return sum >= 1;
}

std::string Valuation::to_string() const {
  std::string out = "{";
  bool first = true;
  for (const auto& [s, b] : bits_) {
    if (!first) out += ",";
    first = false;
    out += s + "=" + std::to_string(b);
  }
  return out + "}";
}

std::vector<Valuation> Valuation::enumerate(const std::vector<std::string>& signals) {
  const std::size_t n = signals.size();
  if (n > 30) throw DiagramError("signal set too large to enumerate");
  std::vector<Valuation> out;
  out.reserve(std::size_t{1} << n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    Valuation v;
    for (std::size_t i = 0; i < n; ++i)
      v.set(signals[i], (mask >> (n - 1 - i)) & 1 ? 1 : 0);
    out.push_back(std::move(v));
  }
  return out;
}

// ---------------------------------------------------------------------------
// VertexKind
// ---------------------------------------------------------------------------

VertexType dual_type(VertexType t) {
  switch (t) {
    case VertexType::Z: return VertexType::X;
    case VertexType::X: return VertexType::Z;
    default: return t;
  }
}

VertexKind VertexKind::spider(VertexType t, PhaseExpr p, ConditionSet c) {
  // A zero phase carries no condition set: the labellings coincide in every
  // valuation.
  if (p.is_zero()) c = ConditionSet{};
  return VertexKind{t, std::move(p), std::move(c)};
}

VertexKind VertexKind::z(PhaseExpr p, ConditionSet c) {
  return spider(VertexType::Z, std::move(p), std::move(c));
}

VertexKind VertexKind::x(PhaseExpr p, ConditionSet c) {
  return spider(VertexType::X, std::move(p), std::move(c));
}

// ---------------------------------------------------------------------------
// Diagram basics
// ---------------------------------------------------------------------------

VertexId Diagram::add_vertex(const VertexKind& kind) {
  VertexId id = next_id_++;
  vertices_.emplace(id, kind);
  return id;
}

void Diagram::add_edge(VertexId u, VertexId v) {
  if (!has_vertex(u) || !has_vertex(v))
    throw DiagramError("edge endpoint does not exist");
  if (u > v) std::swap(u, v);
  edges_.emplace_back(u, v);
}

void Diagram::remove_edge(VertexId u, VertexId v) {
  if (u > v) std::swap(u, v);
  auto it = std::find(edges_.begin(), edges_.end(), std::make_pair(u, v));
  if (it == edges_.end()) throw DiagramError("edge not present");
  edges_.erase(it);
}

void Diagram::remove_vertex(VertexId v) {
  if (!has_vertex(v)) throw DiagramError("vertex not present");
  edges_.erase(std::remove_if(edges_.begin(), edges_.end(),
                              [v](const auto& e) {
                                return e.first == v || e.second == v;
                              }),
               edges_.end());
  std::erase(inputs_, v);
  std::erase(outputs_, v);
  vertices_.erase(v);
}

void Diagram::set_kind(VertexId v, const VertexKind& kind) {
  if (!has_vertex(v)) throw DiagramError("vertex not present");
  vertices_[v] = kind;
}

VertexId Diagram::add_input(std::size_t at_index) {
  VertexId id = add_vertex(VertexKind::boundary());
  if (at_index >= inputs_.size())
    inputs_.push_back(id);
  else
    inputs_.insert(inputs_.begin() + static_cast<std::ptrdiff_t>(at_index), id);
  return id;
}

VertexId Diagram::add_output(std::size_t at_index) {
  VertexId id = add_vertex(VertexKind::boundary());
  if (at_index >= outputs_.size())
    outputs_.push_back(id);
  else
    outputs_.insert(outputs_.begin() + static_cast<std::ptrdiff_t>(at_index), id);
  return id;
}

void Diagram::mark_input(VertexId v) {
  if (kind(v).type != VertexType::Boundary)
    throw DiagramError("mark_input: not a boundary vertex");
  inputs_.push_back(v);
}

void Diagram::mark_output(VertexId v) {
  if (kind(v).type != VertexType::Boundary)
    throw DiagramError("mark_output: not a boundary vertex");
  outputs_.push_back(v);
}

const VertexKind& Diagram::kind(VertexId v) const {
  auto it = vertices_.find(v);
  if (it == vertices_.end()) throw DiagramError("vertex not present");
  return it->second;
}

std::size_t Diagram::degree(VertexId v) const {
  std::size_t d = 0;
  for (const auto& [a, b] : edges_) {
    if (a == v) ++d;
    if (b == v) ++d;
  }
  return d;
}

std::vector<VertexId> Diagram::neighbours(VertexId v) const {
  std::vector<VertexId> out;
  for (const auto& [a, b] : edges_) {
    if (a == v) out.push_back(b);
    if (b == v) out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t Diagram::edge_multiplicity(VertexId u, VertexId v) const {
  if (u > v) std::swap(u, v);
  return static_cast<std::size_t>(
      std::count(edges_.begin(), edges_.end(), std::make_pair(u, v)));
}

bool Diagram::is_boundary(VertexId v) const {
  return kind(v).type == VertexType::Boundary;
}

std::vector<std::string> Diagram::signal_set() const {
  std::set<std::string> sigs;
  for (const auto& [id, k] : vertices_)
    for (const auto& s : k.cond.signals()) sigs.insert(s);
  return {sigs.begin(), sigs.end()};
}

std::vector<std::string> Diagram::angle_variables() const {
  std::set<std::string> vars;
  for (const auto& [id, k] : vertices_)
    for (const auto& [name, coeff] : k.phase.sym_part()) vars.insert(name);
  return {vars.begin(), vars.end()};
}

// ---------------------------------------------------------------------------
// compose / tensor / dagger / apply_valuation
// ---------------------------------------------------------------------------

// Appends `src` to `dst` with fresh ids; returns the id translation map.
std::map<VertexId, VertexId> Diagram::merge_into(Diagram& dst,
                                                 const Diagram& src,
                                                 bool append_io) {
  std::map<VertexId, VertexId> remap;
  for (const auto& [id, k] : src.vertices()) remap[id] = dst.add_vertex(k);
  for (const auto& [u, v] : src.edges()) dst.add_edge(remap[u], remap[v]);
  if (append_io) {
    for (VertexId b : src.inputs()) dst.inputs_.push_back(remap[b]);
    for (VertexId b : src.outputs()) dst.outputs_.push_back(remap[b]);
  }
  return remap;
}

Diagram Diagram::tensor(const Diagram& left, const Diagram& right) {
  Diagram out = left;
  merge_into(out, right, /*append_io=*/true);
  return out;
}

Diagram Diagram::compose(const Diagram& first, const Diagram& second) {
  if (first.outputs_.size() != second.inputs_.size())
    throw DiagramError("compose: boundary arity mismatch (" +
                       std::to_string(first.outputs_.size()) + " outputs vs " +
                       std::to_string(second.inputs_.size()) + " inputs)");
  Diagram out = first;
  auto remap = merge_into(out, second, /*append_io=*/false);

  std::vector<VertexId> mids = out.outputs_;
  out.outputs_.clear();
  for (VertexId b : second.outputs_) out.outputs_.push_back(remap[b]);

  for (std::size_t i = 0; i < mids.size(); ++i) {
    VertexId b1 = mids[i];
    VertexId b2 = remap[second.inputs_[i]];
    auto n1s = out.neighbours(b1);
    auto n2s = out.neighbours(b2);
    if (n1s.size() != 1 || n2s.size() != 1)
      throw DiagramError("compose: boundary vertex not of degree one");
    VertexId n1 = n1s[0], n2 = n2s[0];
    out.remove_vertex(b1);
    out.remove_vertex(b2);
    if (n1 == b2 && n2 == b1) {
      // The fused pair formed a closed wire: a circle, value 2.  A phase-free
      // spider with a self-loop has exactly that value.
      VertexId loop = out.add_vertex(VertexKind::z());
      out.add_edge(loop, loop);
    } else {
      out.add_edge(n1, n2);
    }
  }
  return out;
}

Diagram Diagram::dagger() const {
  Diagram out = *this;
  std::swap(out.inputs_, out.outputs_);
  for (auto& [id, k] : out.vertices_) {
    if (k.is_spider()) k = VertexKind::spider(k.type, -k.phase, k.cond);
  }
  return out;
}

Diagram Diagram::apply_valuation(const Valuation& v) const {
  Diagram out = *this;
  for (auto& [id, k] : out.vertices_) {
    if (!k.is_spider() || k.cond.empty()) continue;
    PhaseExpr phase = v.activates(k.cond) ? k.phase : PhaseExpr::zero();
    k = VertexKind::spider(k.type, std::move(phase), {});
  }
  return out;
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

std::vector<std::string> Diagram::validate() const {
  std::vector<std::string> bad;
  for (const auto& [u, v] : edges_) {
    if (!has_vertex(u) || !has_vertex(v))
      bad.push_back("edge [" + std::to_string(u) + "," + std::to_string(v) +
                    "] references a missing vertex");
  }
  std::map<VertexId, int> io_count;
  for (VertexId b : inputs_) ++io_count[b];
  for (VertexId b : outputs_) ++io_count[b];
  for (const auto& [b, n] : io_count) {
    if (!has_vertex(b) || kind(b).type != VertexType::Boundary)
      bad.push_back("boundary list entry " + std::to_string(b) +
                    " is not a boundary vertex");
    else if (n != 1)
      bad.push_back("boundary vertex " + std::to_string(b) +
                    " listed more than once");
  }
  for (const auto& [id, k] : vertices_) {
    switch (k.type) {
      case VertexType::Boundary:
        if (degree(id) != 1)
          bad.push_back("boundary vertex " + std::to_string(id) +
                        " has degree " + std::to_string(degree(id)));
        if (io_count.find(id) == io_count.end())
          bad.push_back("boundary vertex " + std::to_string(id) +
                        " is in neither inputs nor outputs");
        break;
      case VertexType::H:
        if (degree(id) != 2)
          bad.push_back("H vertex " + std::to_string(id) + " has degree " +
                        std::to_string(degree(id)));
        if (!k.phase.is_zero() || !k.cond.empty())
          bad.push_back("H vertex " + std::to_string(id) +
                        " carries a phase or condition");
        break;
      default:
        if (k.phase.is_zero() && !k.cond.empty())
          bad.push_back("spider " + std::to_string(id) +
                        " has zero phase but a nonempty condition set");
        break;
    }
  }
  return bad;
}

void Diagram::require_valid(const std::string& context) const {
  auto bad = validate();
  if (!bad.empty()) throw DiagramError(context + ": " + bad.front());
}

// ---------------------------------------------------------------------------
// iso_equal
// ---------------------------------------------------------------------------

namespace {

struct IsoSearch {
  const Diagram& a;
  const Diagram& b;
  std::map<VertexId, VertexId> fwd, rev;

  bool compatible(VertexId va, VertexId vb) const {
    if (!(a.kind(va) == b.kind(vb))) return false;
    if (a.degree(va) != b.degree(vb)) return false;
    // Mapped neighbourhoods must match with multiplicity (both directions).
    for (const auto& [u, mapped] : fwd) {
      if (a.edge_multiplicity(va, u) != b.edge_multiplicity(vb, mapped))
        return false;
    }
    return true;
  }

  bool assign(VertexId va, VertexId vb) {
    auto it = fwd.find(va);
    if (it != fwd.end()) return it->second == vb;
    if (rev.count(vb)) return false;
    if (!compatible(va, vb)) return false;
    fwd[va] = vb;
    rev[vb] = va;
    return true;
  }

  bool extend(std::vector<VertexId>& order, std::size_t idx) {
    if (idx == order.size()) return true;
    VertexId va = order[idx];
    if (fwd.count(va)) return extend(order, idx + 1);
    for (const auto& [vb, kb] : b.vertices()) {
      if (rev.count(vb)) continue;
      auto fwd_save = fwd;
      auto rev_save = rev;
      if (assign(va, vb) && extend(order, idx + 1)) return true;
      fwd = std::move(fwd_save);
      rev = std::move(rev_save);
    }
    return false;
  }
};

}  // namespace

bool Diagram::iso_equal(const Diagram& a, const Diagram& b) {
  if (a.vertices_.size() != b.vertices_.size()) return false;
  if (a.edges_.size() != b.edges_.size()) return false;
  if (a.inputs_.size() != b.inputs_.size()) return false;
  if (a.outputs_.size() != b.outputs_.size()) return false;

  IsoSearch search{a, b, {}, {}};
  for (std::size_t i = 0; i < a.inputs_.size(); ++i)
    if (!search.assign(a.inputs_[i], b.inputs_[i])) return false;
  for (std::size_t i = 0; i < a.outputs_.size(); ++i)
    if (!search.assign(a.outputs_[i], b.outputs_[i])) return false;

  std::vector<VertexId> order;
  for (const auto& [id, k] : a.vertices_) order.push_back(id);
  // Process high-degree vertices first: fail fast.
  std::stable_sort(order.begin(), order.end(), [&](VertexId l, VertexId r) {
    return a.degree(l) > a.degree(r);
  });
  return search.extend(order, 0);
}

std::uint64_t Diagram::hash() const {
  const std::string canon = to_json(*this).dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

Diagram identity_diagram(std::size_t n) {
  Diagram d;
  for (std::size_t i = 0; i < n; ++i) {
    VertexId in = d.add_input();
    VertexId out = d.add_output();
    d.add_edge(in, out);
  }
  return d;
}

}  // namespace zx
