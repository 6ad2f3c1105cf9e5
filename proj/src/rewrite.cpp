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

#include "zx/rewrite.hpp"

#include <algorithm>
#include <numbers>
#include <random>

#include "zx/eval.hpp"

namespace zx {

namespace {

// Spider colours of a rule presentation: `primary` is the colour the rule is
// stated for (Z in the non-dual form), `moving` its complement.
VertexType primary_colour(const RuleId& r) {
  return r.dual ? VertexType::X : VertexType::Z;
}

bool is_spider_of(const Diagram& d, VertexId v, VertexType t) {
  return d.has_vertex(v) && d.kind(v).type == t;
}

bool has_self_loop(const Diagram& d, VertexId v) {
  return d.edge_multiplicity(v, v) > 0;
}

// Other endpoints of v's edges, excluding `skip` occurrences of edge {v, u}.
std::vector<VertexId> legs_except(const Diagram& d, VertexId v, VertexId u,
                                  std::size_t skip) {
  std::vector<VertexId> out;
  for (const auto& [a, b] : d.edges()) {
    if (a != v && b != v) continue;
    VertexId w = a == v ? b : a;
    if (a == v && b == v) w = v;  // self-loop: count once, handled by caller
    if (w == u && skip > 0) {
      --skip;
      continue;
    }
    out.push_back(w);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// RuleId
// ---------------------------------------------------------------------------

std::string RuleId::name() const {
  std::string base;
  switch (rule) {
    case Rule::Spider: base = "spider"; break;
    case Rule::Identity: base = "identity"; break;
    case Rule::AntiLoop: base = "anti-loop"; break;
    case Rule::Copying: base = "copying"; break;
    case Rule::PiCommute: base = "pi-commute"; break;
    case Rule::AlphaCommute: base = "alpha-commute"; break;
    case Rule::Bialgebra: base = "bialgebra"; break;
    case Rule::Hopf: base = "hopf"; break;
    case Rule::HCommute: base = "h-commute"; break;
    case Rule::HCancel: base = "h-cancel"; break;
  }
  return dual ? base + "-dual" : base;
}

RuleId RuleId::from_name(const std::string& name) {
  for (const RuleId& r : all())
    if (r.name() == name) return r;
  throw RewriteError("unknown rule: " + name);
}

std::vector<RuleId> RuleId::all() {
  std::vector<RuleId> out;
  for (Rule r : {Rule::Spider, Rule::Identity, Rule::AntiLoop, Rule::Copying,
                 Rule::PiCommute, Rule::AlphaCommute, Rule::Bialgebra,
                 Rule::Hopf, Rule::HCommute, Rule::HCancel}) {
    out.push_back({r, false});
    out.push_back({r, true});
  }
  return out;
}

// ---------------------------------------------------------------------------
// match predicates (shared between find_matches and apply)
// ---------------------------------------------------------------------------

namespace {

bool spider_match(const Diagram& d, const RuleId& r,
                  const std::vector<VertexId>& a) {
  if (a.size() != 2) return false;
  const VertexType p = primary_colour(r);
  if (!is_spider_of(d, a[0], p) || !is_spider_of(d, a[1], p)) return false;
  if (a[0] == a[1]) return false;
  if (d.edge_multiplicity(a[0], a[1]) < 1) return false;
  return d.kind(a[0]).cond == d.kind(a[1]).cond;
}

bool identity_match(const Diagram& d, const RuleId& r,
                    const std::vector<VertexId>& a) {
  if (a.size() != 1) return false;
  const VertexId v = a[0];
  if (!is_spider_of(d, v, primary_colour(r))) return false;
  if (!d.kind(v).phase.is_zero()) return false;
  if (d.degree(v) != 2 || has_self_loop(d, v)) return false;
  return true;
}

bool antiloop_match(const Diagram& d, const RuleId& r,
                    const std::vector<VertexId>& a) {
  return a.size() == 1 && is_spider_of(d, a[0], primary_colour(r)) &&
         has_self_loop(d, a[0]);
}

bool copying_match(const Diagram& d, const RuleId& r,
                   const std::vector<VertexId>& a) {
  if (a.size() != 2) return false;
  const VertexType p = primary_colour(r);
  const VertexId pt = a[0], v = a[1];
  if (!is_spider_of(d, pt, dual_type(p)) || !is_spider_of(d, v, p)) return false;
  if (pt == v) return false;
  if (!d.kind(pt).phase.is_zero()) return false;
  if (d.degree(pt) != 1 || d.edge_multiplicity(pt, v) != 1) return false;
  if (d.kind(v).is_conditional() || has_self_loop(d, v)) return false;
  return true;
}

bool picommute_match(const Diagram& d, const RuleId& r,
                     const std::vector<VertexId>& a) {
  if (a.size() != 2) return false;
  const VertexType p = primary_colour(r);
  const VertexId mv = a[0], v = a[1];
  if (!is_spider_of(d, mv, dual_type(p)) || !is_spider_of(d, v, p)) return false;
  if (mv == v) return false;
  if (!d.kind(mv).phase.is_pi()) return false;
  if (d.degree(mv) != 2 || d.edge_multiplicity(mv, v) != 1) return false;
  if (has_self_loop(d, v)) return false;
  // A conditional pi only commutes when negating the spider phase is the
  // identity relabelling (phase 0 or pi), so every valuation agrees.
  if (d.kind(mv).is_conditional() && !d.kind(v).phase.is_pauli()) return false;
  return true;
}

bool alphacommute_match(const Diagram& d, const RuleId& r,
                        const std::vector<VertexId>& a) {
  if (a.size() != 2) return false;
  const VertexType p = primary_colour(r);
  const VertexId mv = a[0], v = a[1];
  if (!is_spider_of(d, mv, p) || !is_spider_of(d, v, p)) return false;
  if (mv == v || d.degree(mv) != 2) return false;
  if (d.edge_multiplicity(mv, v) < 1) return false;
  return !d.kind(mv).is_conditional() && !d.kind(v).is_conditional();
}

bool bialgebra_match(const Diagram& d, const RuleId& r,
                     const std::vector<VertexId>& a) {
  if (a.size() != 4) return false;
  const VertexType p = primary_colour(r);
  const VertexId z1 = a[0], z2 = a[1], x1 = a[2], x2 = a[3];
  std::vector<VertexId> quad = {z1, z2, x1, x2};
  std::sort(quad.begin(), quad.end());
  if (std::adjacent_find(quad.begin(), quad.end()) != quad.end()) return false;
  for (VertexId z : {z1, z2}) {
    if (!is_spider_of(d, z, p)) return false;
    const auto& k = d.kind(z);
    if (!k.phase.is_zero() || !k.cond.empty()) return false;
    if (d.degree(z) != 3 || has_self_loop(d, z)) return false;
  }
  for (VertexId x : {x1, x2}) {
    if (!is_spider_of(d, x, dual_type(p))) return false;
    const auto& k = d.kind(x);
    if (!k.phase.is_zero() || !k.cond.empty()) return false;
    if (d.degree(x) != 3 || has_self_loop(d, x)) return false;
  }
  for (VertexId z : {z1, z2})
    for (VertexId x : {x1, x2})
      if (d.edge_multiplicity(z, x) != 1) return false;
  if (d.edge_multiplicity(z1, z2) != 0 || d.edge_multiplicity(x1, x2) != 0)
    return false;
  // Degree 3 with single edges to both opposite spiders leaves exactly one
  // outer leg each, and its endpoint cannot be in the quad.
  return true;
}

bool hopf_match(const Diagram& d, const RuleId& r,
                const std::vector<VertexId>& a) {
  const VertexType p = primary_colour(r);
  if (a.size() == 2) {
    // Two parallel plain edges between opposite-colour spiders.
    return is_spider_of(d, a[0], p) && is_spider_of(d, a[1], dual_type(p)) &&
           a[0] != a[1] && d.edge_multiplicity(a[0], a[1]) >= 2;
  }
  if (a.size() == 4) {
    // Two parallel length-2 H paths between same-colour spiders.
    const VertexId u = a[0], v = a[1], h1 = a[2], h2 = a[3];
    if (!is_spider_of(d, u, p) || !is_spider_of(d, v, p)) return false;
    if (u == v || h1 == h2) return false;
    for (VertexId h : {h1, h2}) {
      if (!d.has_vertex(h) || d.kind(h).type != VertexType::H) return false;
      if (d.degree(h) != 2) return false;
      if (d.edge_multiplicity(u, h) != 1 || d.edge_multiplicity(h, v) != 1)
        return false;
    }
    return true;
  }
  return false;
}

bool hcommute_match(const Diagram& d, const RuleId& r,
                    const std::vector<VertexId>& a) {
  // Non-dual form converts an X spider to Z (prefer-Z normalisation).
  return a.size() == 1 && is_spider_of(d, a[0], dual_type(primary_colour(r)));
}

bool hcancel_match(const Diagram& d, const RuleId&,
                   const std::vector<VertexId>& a) {
  if (a.size() != 2 || a[0] == a[1]) return false;
  for (VertexId h : {a[0], a[1]}) {
    if (!d.has_vertex(h) || d.kind(h).type != VertexType::H) return false;
    if (d.degree(h) != 2) return false;
  }
  return d.edge_multiplicity(a[0], a[1]) >= 1;
}

bool site_matches(const Diagram& d, const MatchSite& s) {
  switch (s.rule.rule) {
    case Rule::Spider: return spider_match(d, s.rule, s.anchors);
    case Rule::Identity: return identity_match(d, s.rule, s.anchors);
    case Rule::AntiLoop: return antiloop_match(d, s.rule, s.anchors);
    case Rule::Copying: return copying_match(d, s.rule, s.anchors);
    case Rule::PiCommute: return picommute_match(d, s.rule, s.anchors);
    case Rule::AlphaCommute: return alphacommute_match(d, s.rule, s.anchors);
    case Rule::Bialgebra: return bialgebra_match(d, s.rule, s.anchors);
    case Rule::Hopf: return hopf_match(d, s.rule, s.anchors);
    case Rule::HCommute: return hcommute_match(d, s.rule, s.anchors);
    case Rule::HCancel: return hcancel_match(d, s.rule, s.anchors);
  }
  return false;
}

}  // namespace

// ---------------------------------------------------------------------------
// find_matches
// ---------------------------------------------------------------------------

std::vector<MatchSite> find_matches(const Diagram& d, RuleId rule) {
  std::vector<MatchSite> out;
  auto consider = [&](std::vector<VertexId> anchors) {
    MatchSite s{rule, std::move(anchors)};
    if (site_matches(d, s)) out.push_back(std::move(s));
  };

  std::vector<VertexId> ids;
  for (const auto& [id, k] : d.vertices()) ids.push_back(id);

  switch (rule.rule) {
    case Rule::Identity:
    case Rule::AntiLoop:
    case Rule::HCommute:
      for (VertexId v : ids) consider({v});
      break;
    case Rule::Spider:
    case Rule::HCancel:
      for (const auto& [u, v] : d.edges())
        if (u != v) consider({u, v});
      break;
    case Rule::Copying:
    case Rule::PiCommute:
    case Rule::AlphaCommute:
      for (const auto& [u, v] : d.edges()) {
        if (u == v) continue;
        consider({u, v});
        consider({v, u});
      }
      break;
    case Rule::Hopf: {
      for (VertexId u : ids)
        for (VertexId v : ids)
          if (u < v) {
            consider({u, v});
            consider({v, u});
          }
      // H-path form: pairs of H vertices sharing both endpoints.
      for (VertexId u : ids) {
        if (!is_spider_of(d, u, primary_colour(rule))) continue;
        for (VertexId v : ids) {
          if (v <= u || !is_spider_of(d, v, primary_colour(rule))) continue;
          std::vector<VertexId> hs;
          for (VertexId h : ids) {
            if (d.has_vertex(h) && d.kind(h).type == VertexType::H &&
                d.edge_multiplicity(u, h) == 1 && d.edge_multiplicity(h, v) == 1)
              hs.push_back(h);
          }
          for (std::size_t i = 0; i + 1 < hs.size(); ++i)
            consider({u, v, hs[i], hs[i + 1]});
        }
      }
      break;
    }
    case Rule::Bialgebra: {
      // Enumerate candidate quads from adjacent opposite-colour pairs.
      const VertexType p = primary_colour(rule);
      std::vector<VertexId> zs, xs;
      for (VertexId v : ids) {
        if (is_spider_of(d, v, p) && d.degree(v) == 3) zs.push_back(v);
        if (is_spider_of(d, v, dual_type(p)) && d.degree(v) == 3)
          xs.push_back(v);
      }
      for (std::size_t i = 0; i < zs.size(); ++i)
        for (std::size_t j = i + 1; j < zs.size(); ++j)
          for (std::size_t k = 0; k < xs.size(); ++k)
            for (std::size_t l = k + 1; l < xs.size(); ++l)
              consider({zs[i], zs[j], xs[k], xs[l]});
      break;
    }
  }

  std::sort(out.begin(), out.end(), [](const MatchSite& a, const MatchSite& b) {
    return a.anchors < b.anchors;
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const MatchSite& a, const MatchSite& b) {
                          return a.anchors == b.anchors;
                        }),
            out.end());
  return out;
}

// ---------------------------------------------------------------------------
// apply
// ---------------------------------------------------------------------------

namespace {

// Merges spider `gone` into `kept` (same colour, fusable): phases add, one
// connecting edge is consumed, all other edges of `gone` reattach to `kept`.
void fuse_spiders(Diagram& d, VertexId kept, VertexId gone) {
  const VertexKind kk = d.kind(kept);
  const VertexKind gk = d.kind(gone);
  d.set_kind(kept, VertexKind::spider(kk.type, kk.phase + gk.phase,
                                      kk.cond.empty() ? gk.cond : kk.cond));
  d.remove_edge(kept, gone);
  std::vector<std::pair<VertexId, VertexId>> moved;
  for (const auto& [a, b] : d.edges()) {
    if (a == gone || b == gone) {
      VertexId other = a == gone ? b : a;
      if (a == gone && b == gone) other = kept;  // self-loop follows the merge
      moved.emplace_back(kept, other == gone ? kept : other);
    }
  }
  d.remove_vertex(gone);
  for (const auto& [a, b] : moved) d.add_edge(a, b);
}

void insert_on_edge(Diagram& d, VertexId u, VertexId w, VertexId inserted) {
  d.remove_edge(u, w);
  d.add_edge(u, inserted);
  d.add_edge(inserted, w);
}

Diagram apply_unchecked(const Diagram& input, const MatchSite& site) {
  Diagram d = input;
  const auto& a = site.anchors;
  const VertexType p = primary_colour(site.rule);
  switch (site.rule.rule) {
    case Rule::Spider:
      fuse_spiders(d, a[0], a[1]);
      break;
    case Rule::Identity: {
      auto ns = d.neighbours(a[0]);
      d.remove_vertex(a[0]);
      d.add_edge(ns[0], ns[1]);
      break;
    }
    case Rule::AntiLoop:
      d.remove_edge(a[0], a[0]);
      break;
    case Rule::Copying: {
      const VertexId pt = a[0], v = a[1];
      const VertexKind pk = d.kind(pt);
      auto legs = legs_except(d, v, pt, 1);
      d.remove_vertex(pt);
      d.remove_vertex(v);
      for (VertexId w : legs) {
        VertexId fresh = d.add_vertex(pk);
        d.add_edge(fresh, w);
      }
      break;
    }
    case Rule::PiCommute: {
      const VertexId mv = a[0], v = a[1];
      const ConditionSet cond = d.kind(mv).cond;
      auto mv_legs = legs_except(d, mv, v, 1);  // the single far endpoint
      const VertexId far = mv_legs.at(0);
      auto legs = legs_except(d, v, mv, 1);
      const VertexKind vk = d.kind(v);
      d.set_kind(v, VertexKind::spider(vk.type, -vk.phase, vk.cond));
      d.remove_vertex(mv);
      d.add_edge(far, v);
      for (VertexId w : legs) {
        VertexId q = d.add_vertex(
            VertexKind::spider(dual_type(p), PhaseExpr::pi(), cond));
        insert_on_edge(d, v, w, q);
      }
      break;
    }
    case Rule::AlphaCommute:
      fuse_spiders(d, a[1], a[0]);
      break;
    case Rule::Bialgebra: {
      const VertexId z1 = a[0], z2 = a[1], x1 = a[2], x2 = a[3];
      auto outer = [&](VertexId q, VertexId ex1, VertexId ex2) {
        for (VertexId w : d.neighbours(q))
          if (w != ex1 && w != ex2) return w;
        throw RewriteError("bialgebra: missing outer leg");
      };
      const VertexId za = outer(z1, x1, x2), zb = outer(z2, x1, x2);
      const VertexId xa = outer(x1, z1, z2), xb = outer(x2, z1, z2);
      d.remove_vertex(z1);
      d.remove_vertex(z2);
      d.remove_vertex(x1);
      d.remove_vertex(x2);
      const VertexId xm = d.add_vertex(VertexKind::spider(dual_type(p)));
      const VertexId zm = d.add_vertex(VertexKind::spider(p));
      d.add_edge(xm, za);
      d.add_edge(xm, zb);
      d.add_edge(zm, xa);
      d.add_edge(zm, xb);
      d.add_edge(xm, zm);
      break;
    }
    case Rule::Hopf:
      if (a.size() == 2) {
        d.remove_edge(a[0], a[1]);
        d.remove_edge(a[0], a[1]);
      } else {
        d.remove_vertex(a[2]);
        d.remove_vertex(a[3]);
      }
      break;
    case Rule::HCommute: {
      const VertexId v = a[0];
      const VertexKind vk = d.kind(v);
      d.set_kind(v, VertexKind::spider(dual_type(vk.type), vk.phase, vk.cond));
      // Toggle H on every leg: drop neighbouring H vertices, insert fresh
      // ones on plain edges.  Self-loops get an H inserted as well.
      std::vector<VertexId> h_neighbours;
      std::vector<std::pair<VertexId, VertexId>> plain;  // (v, w) occurrences
      for (const auto& [x, y] : d.edges()) {
        if (x != v && y != v) continue;
        VertexId w = x == v ? y : x;
        if (x == v && y == v) {
          plain.emplace_back(v, v);
          continue;
        }
        if (d.kind(w).type == VertexType::H && d.degree(w) == 2)
          h_neighbours.push_back(w);
        else
          plain.emplace_back(v, w);
      }
      std::sort(h_neighbours.begin(), h_neighbours.end());
      h_neighbours.erase(std::unique(h_neighbours.begin(), h_neighbours.end()),
                         h_neighbours.end());
      for (VertexId h : h_neighbours) {
        // An H doubly attached to v collapses to a plain self-loop.
        if (d.edge_multiplicity(v, h) == 2) {
          d.remove_vertex(h);
          d.add_edge(v, v);
          continue;
        }
        auto other = legs_except(d, h, v, 1);
        d.remove_vertex(h);
        d.add_edge(v, other.at(0));
      }
      for (const auto& [u, w] : plain) {
        VertexId h = d.add_vertex(VertexKind::h());
        insert_on_edge(d, u, w, h);
      }
      break;
    }
    case Rule::HCancel: {
      const VertexId h1 = a[0], h2 = a[1];
      if (d.edge_multiplicity(h1, h2) == 2) {
        // Closed H pair: the circle scalar 2.
        d.remove_vertex(h1);
        d.remove_vertex(h2);
        VertexId loop = d.add_vertex(VertexKind::z());
        d.add_edge(loop, loop);
      } else {
        const VertexId r1 = legs_except(d, h1, h2, 1).at(0);
        const VertexId r2 = legs_except(d, h2, h1, 1).at(0);
        d.remove_vertex(h1);
        d.remove_vertex(h2);
        d.add_edge(r1, r2);
      }
      break;
    }
  }
  return d;
}

}  // namespace

Diagram apply(const Diagram& d, const MatchSite& site) {
  if (!site_matches(d, site))
    throw RewriteError("stale rewrite site for rule " + site.rule.name());
  Diagram out = apply_unchecked(d, site);
  out.require_valid("after " + site.rule.name());
  return out;
}

// ---------------------------------------------------------------------------
// traces
// ---------------------------------------------------------------------------

void RewriteTrace::append(std::string rule, std::vector<VertexId> anchors,
                          const Diagram& after) {
  steps.push_back({std::move(rule), std::move(anchors), after.hash()});
}

Json RewriteTrace::to_json() const {
  Json arr = Json::array();
  for (const auto& s : steps) {
    Json j;
    j["rule"] = s.rule;
    j["anchors"] = s.anchors;
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(s.hash));
    j["hash"] = std::string(buf);
    arr.push_back(std::move(j));
  }
  return arr;
}

RewriteTrace RewriteTrace::from_json(const Json& j) {
  RewriteTrace t;
  for (const auto& step : j) {
    TraceStep s;
    s.rule = step.at("rule").get<std::string>();
    s.anchors = step.at("anchors").get<std::vector<VertexId>>();
    s.hash = std::stoull(step.at("hash").get<std::string>(), nullptr, 16);
    t.steps.push_back(std::move(s));
  }
  return t;
}

// ---------------------------------------------------------------------------
// push_error micro-moves (shared with replay)
// ---------------------------------------------------------------------------

namespace {

VertexId other_neighbour(const Diagram& d, VertexId v, VertexId not_this) {
  auto legs = legs_except(d, v, not_this, 1);
  if (legs.size() != 1)
    throw RewriteError("expected a degree-2 wire vertex");
  return legs[0];
}

bool is_pi_wire_vertex(const Diagram& d, VertexId v) {
  return d.has_vertex(v) && d.kind(v).is_spider() && d.degree(v) == 2 &&
         d.kind(v).phase.is_pi() && !has_self_loop(d, v);
}

bool push_cancel_ok(const Diagram& d, VertexId e, VertexId n) {
  if (!is_pi_wire_vertex(d, e) || !is_pi_wire_vertex(d, n)) return false;
  if (e == n || d.edge_multiplicity(e, n) != 1) return false;
  return d.kind(e).type == d.kind(n).type && d.kind(e).cond == d.kind(n).cond;
}

Diagram push_cancel(const Diagram& input, VertexId e, VertexId n) {
  if (!push_cancel_ok(input, e, n)) throw RewriteError("stale push-cancel");
  Diagram d = input;
  const VertexId a = other_neighbour(d, e, n);
  const VertexId b = other_neighbour(d, n, e);
  d.remove_vertex(e);
  d.remove_vertex(n);
  d.add_edge(a, b);
  return d;
}

bool push_swap_ok(const Diagram& d, VertexId e, VertexId n) {
  if (!is_pi_wire_vertex(d, e)) return false;
  if (!d.has_vertex(n) || !d.kind(n).is_spider()) return false;
  if (d.degree(n) != 2 || has_self_loop(d, n)) return false;
  if (e == n || d.edge_multiplicity(e, n) != 1) return false;
  if (d.kind(e).type == d.kind(n).type) return true;  // diagonal: exact
  // Opposite colours commute up to a per-valuation sign for Pauli phases.
  return d.kind(n).phase.is_pauli();
}

Diagram push_swap(const Diagram& input, VertexId e, VertexId n) {
  if (!push_swap_ok(input, e, n)) throw RewriteError("stale push-swap");
  Diagram d = input;
  const VertexId a = other_neighbour(d, e, n);
  const VertexId b = other_neighbour(d, n, e);
  d.remove_edge(a, e);
  d.remove_edge(n, b);
  d.add_edge(a, n);
  d.add_edge(e, b);
  return d;
}

bool push_hcross_ok(const Diagram& d, VertexId e, VertexId h) {
  if (!is_pi_wire_vertex(d, e)) return false;
  if (!d.has_vertex(h) || d.kind(h).type != VertexType::H) return false;
  return d.degree(h) == 2 && d.edge_multiplicity(e, h) == 1;
}

Diagram push_hcross(const Diagram& input, VertexId e, VertexId h) {
  if (!push_hcross_ok(input, e, h)) throw RewriteError("stale push-hcross");
  Diagram d = input;
  const VertexId a = other_neighbour(d, e, h);
  const VertexId b = other_neighbour(d, h, e);
  d.remove_edge(a, e);
  d.remove_edge(h, b);
  d.add_edge(a, h);
  d.add_edge(e, b);
  const VertexKind k = d.kind(e);
  d.set_kind(e, VertexKind::spider(dual_type(k.type), k.phase, k.cond));
  return d;
}

bool push_slide_ok(const Diagram& d, VertexId e, VertexId v, VertexId w) {
  if (!is_pi_wire_vertex(d, e)) return false;
  if (!d.has_vertex(v) || !d.kind(v).is_spider()) return false;
  if (d.kind(v).type != d.kind(e).type) return false;  // same-colour only
  if (e == v || d.edge_multiplicity(e, v) < 1) return false;
  if (w == e || !d.has_vertex(w)) return false;
  return d.edge_multiplicity(v, w) >= 1;
}

Diagram push_slide(const Diagram& input, VertexId e, VertexId v, VertexId w) {
  if (!push_slide_ok(input, e, v, w)) throw RewriteError("stale push-slide");
  Diagram d = input;
  const VertexId a = other_neighbour(d, e, v);
  d.remove_edge(a, e);
  d.remove_edge(e, v);
  d.add_edge(a, v);
  d.remove_edge(v, w);
  d.add_edge(v, e);
  d.add_edge(e, w);
  return d;
}

bool push_absorb_ok(const Diagram& d, VertexId e, VertexId eff) {
  if (!is_pi_wire_vertex(d, e)) return false;
  if (!d.has_vertex(eff) || !d.kind(eff).is_spider()) return false;
  if (d.degree(eff) != 1 || d.edge_multiplicity(e, eff) != 1) return false;
  if (d.kind(eff).type != dual_type(d.kind(e).type)) return false;
  // Flipping the effect angle must be a no-op: phase 0 or pi, no symbols.
  return d.kind(eff).phase.is_pauli() && !d.kind(eff).is_conditional();
}

Diagram push_absorb(const Diagram& input, VertexId e, VertexId eff) {
  if (!push_absorb_ok(input, e, eff)) throw RewriteError("stale push-absorb");
  Diagram d = input;
  const VertexId a = other_neighbour(d, e, eff);
  d.remove_vertex(e);
  d.add_edge(a, eff);
  return d;
}

}  // namespace

Diagram replay(const Diagram& initial, const RewriteTrace& trace) {
  Diagram d = initial;
  for (const auto& step : trace.steps) {
    if (step.rule == "push-cancel") {
      d = push_cancel(d, step.anchors.at(0), step.anchors.at(1));
    } else if (step.rule == "push-swap") {
      d = push_swap(d, step.anchors.at(0), step.anchors.at(1));
    } else if (step.rule == "push-hcross") {
      d = push_hcross(d, step.anchors.at(0), step.anchors.at(1));
    } else if (step.rule == "push-slide") {
      d = push_slide(d, step.anchors.at(0), step.anchors.at(1),
                     step.anchors.at(2));
    } else if (step.rule == "push-absorb") {
      d = push_absorb(d, step.anchors.at(0), step.anchors.at(1));
    } else {
      d = apply(d, MatchSite{RuleId::from_name(step.rule), step.anchors});
    }
    if (d.hash() != step.hash)
      throw RewriteError("trace replay diverged at rule " + step.rule);
  }
  return d;
}

// ---------------------------------------------------------------------------
// simplify
// ---------------------------------------------------------------------------

Strategy strategy_from_string(const std::string& s) {
  if (s == "fuse") return Strategy::Fuse;
  if (s == "full") return Strategy::Full;
  throw RewriteError("unknown strategy: " + s);
}

std::pair<Diagram, RewriteTrace> simplify(const Diagram& input,
                                          Strategy strategy) {
  std::vector<RuleId> order = {
      {Rule::Spider, false},   {Rule::Spider, true},
      {Rule::Identity, false}, {Rule::Identity, true},
      {Rule::AntiLoop, false}, {Rule::AntiLoop, true},
      {Rule::HCancel, false},
  };
  if (strategy == Strategy::Full) {
    order.push_back({Rule::Hopf, false});
    order.push_back({Rule::Hopf, true});
    order.push_back({Rule::Copying, false});
    order.push_back({Rule::Copying, true});
    order.push_back({Rule::HCommute, false});  // prefer Z spiders
  }

  Diagram d = input;
  RewriteTrace trace;
  const std::size_t budget =
      500 + 60 * (d.vertices().size() + d.edges().size());
  for (std::size_t step = 0;; ++step) {
    if (step > budget) throw RewriteError("simplify exceeded its step budget");
    bool fired = false;
    for (const RuleId& r : order) {
      auto sites = find_matches(d, r);
      if (sites.empty()) continue;
      d = apply_unchecked(d, sites.front());
      trace.append(r.name(), sites.front().anchors, d);
      fired = true;
      break;
    }
    if (!fired) break;
  }
  d.require_valid("simplify result");
  return {std::move(d), std::move(trace)};
}

// ---------------------------------------------------------------------------
// push_error
// ---------------------------------------------------------------------------

namespace {

enum class TravelEnd { Cancelled, Absorbed, Commuted, Parked };

struct Traveller {
  Diagram d;
  RewriteTrace trace;
  std::vector<VertexId> parked;
  std::optional<VertexId> commuted_at;  // spider of the pi-commutation, if any
};

// Advances the pi vertex `e` starting towards `forward`.  May branch on
// slide targets (speculatively, committing the best outcome).  When
// `allow_commute` is set, reaching an opposite-colour spider fires the
// pi-commutation and resolves each emitted vertex without further commutes.
TravelEnd travel(Traveller& t, VertexId e, VertexId forward, bool allow_commute,
                 std::optional<VertexId> toward, int depth);

// Rank for choosing among speculative branches: lower is better.  A
// cancellation removes the matching corrector as well and always wins; a
// commutation through the steered-for spider beats an absorption into some
// unrelated measurement effect, which in turn beats a stray commutation.
constexpr int kParkedRank = 5;
int branch_rank(TravelEnd end, const Traveller& t,
                const std::optional<VertexId>& toward) {
  switch (end) {
    case TravelEnd::Cancelled: return 0;
    case TravelEnd::Commuted:
      return (!toward || t.commuted_at == toward) ? 1 : 3;
    case TravelEnd::Absorbed: return 2;
    case TravelEnd::Parked: return kParkedRank;
  }
  return kParkedRank;
}

TravelEnd travel(Traveller& t, VertexId e, VertexId forward, bool allow_commute,
                 std::optional<VertexId> toward, int depth) {
  if (depth > 64) return TravelEnd::Parked;
  for (int hop = 0; hop < 256; ++hop) {
    Diagram& d = t.d;
    if (!d.has_vertex(e) || !is_pi_wire_vertex(d, e)) return TravelEnd::Parked;
    const VertexId n = forward;
    if (!d.has_vertex(n) || d.edge_multiplicity(e, n) < 1)
      return TravelEnd::Parked;

    if (push_cancel_ok(d, e, n)) {
      t.d = push_cancel(d, e, n);
      t.trace.append("push-cancel", {e, n}, t.d);
      return TravelEnd::Cancelled;
    }
    if (push_absorb_ok(d, e, n)) {
      t.d = push_absorb(d, e, n);
      t.trace.append("push-absorb", {e, n}, t.d);
      return TravelEnd::Absorbed;
    }
    const VertexKind nk = d.kind(n);
    if (nk.type == VertexType::H && push_hcross_ok(d, e, n)) {
      t.d = push_hcross(d, e, n);
      t.trace.append("push-hcross", {e, n}, t.d);
      forward = other_neighbour(t.d, e, n);
      continue;
    }
    if (nk.is_spider() && d.degree(n) == 2 && push_swap_ok(d, e, n)) {
      // Step over a non-matching corrector on the wire.
      const VertexId beyond = other_neighbour(d, n, e);
      t.d = push_swap(d, e, n);
      t.trace.append("push-swap", {e, n}, t.d);
      forward = beyond;
      continue;
    }
    if (nk.is_spider() && nk.type == dual_type(d.kind(e).type)) {
      if (!allow_commute) return TravelEnd::Parked;
      const MatchSite site{
          {Rule::PiCommute, d.kind(e).type == VertexType::Z}, {e, n}};
      if (!site_matches(d, site)) return TravelEnd::Parked;
      // Record emitted-vertex ids: they are the fresh vertices.
      std::set<VertexId> before;
      for (const auto& [id, k] : d.vertices()) before.insert(id);
      t.d = apply_unchecked(d, site);
      t.trace.append(site.rule.name(), site.anchors, t.d);
      t.commuted_at = n;
      std::vector<VertexId> emitted;
      for (const auto& [id, k] : t.d.vertices())
        if (before.find(id) == before.end()) emitted.push_back(id);
      for (VertexId q : emitted) {
        if (!t.d.has_vertex(q)) continue;
        // Resolve away from the through-spider n.
        VertexId out = other_neighbour(t.d, q, n);
        TravelEnd end = travel(t, q, out, false, std::nullopt, depth + 1);
        if (end == TravelEnd::Parked && t.d.has_vertex(q))
          t.parked.push_back(q);
      }
      return TravelEnd::Commuted;
    }
    if (nk.is_spider() && nk.type == d.kind(e).type && d.degree(n) != 2) {
      // Slide across the same-colour spider: branch over its legs.
      auto legs = legs_except(d, n, e, 1);
      std::sort(legs.begin(), legs.end());
      legs.erase(std::unique(legs.begin(), legs.end()), legs.end());
      // Prefer the steering hint: a leg that is, or leads through an H to,
      // the `toward` vertex.
      std::stable_sort(legs.begin(), legs.end(), [&](VertexId l, VertexId r) {
        auto score = [&](VertexId w) {
          if (toward && w == *toward) return 0;
          if (toward && d.has_vertex(w) && d.kind(w).type == VertexType::H &&
              d.degree(w) == 2 && d.edge_multiplicity(w, *toward) >= 1)
            return 0;
          return 1;
        };
        return score(l) < score(r);
      });
      Traveller best;
      int best_rank = kParkedRank;
      TravelEnd best_end = TravelEnd::Parked;
      for (VertexId w : legs) {
        if (!push_slide_ok(d, e, n, w)) continue;
        Traveller branch{t.d, t.trace, t.parked, t.commuted_at};
        branch.d = push_slide(branch.d, e, n, w);
        branch.trace.append("push-slide", {e, n, w}, branch.d);
        TravelEnd end = travel(branch, e, w, allow_commute, toward, depth + 1);
        const int rank = branch_rank(end, branch, toward);
        if (rank < best_rank) {
          best_rank = rank;
          best = std::move(branch);
          best_end = end;
          if (best_rank == 0) break;
        }
      }
      if (best_rank < kParkedRank) {
        t = std::move(best);
        return best_end;
      }
      return TravelEnd::Parked;
    }
    return TravelEnd::Parked;  // boundary or unhandled shape
  }
  return TravelEnd::Parked;
}

}  // namespace

PushResult push_error(const Diagram& input, VertexId error_vertex,
                      std::optional<VertexId> toward) {
  if (!input.has_vertex(error_vertex) ||
      !input.kind(error_vertex).is_spider() ||
      !input.kind(error_vertex).phase.is_pi() ||
      !input.kind(error_vertex).is_conditional())
    throw RewriteError("push_error: vertex is not a conditional pi spider");
  if (input.degree(error_vertex) != 2)
    throw RewriteError("push_error: conditional pi vertex is not on a wire");

  auto dirs = input.neighbours(error_vertex);
  dirs.erase(std::unique(dirs.begin(), dirs.end()), dirs.end());

  Traveller best;
  int best_rank = kParkedRank;
  for (VertexId dir : dirs) {
    Traveller branch{input, {}, {}, {}};
    TravelEnd end = travel(branch, error_vertex, dir, true, toward, 0);
    const int rank = branch_rank(end, branch, toward);
    if (rank < best_rank) {
      best_rank = rank;
      best = std::move(branch);
      if (best_rank == 0) break;
    }
  }

  if (best_rank >= kParkedRank) {
    // Blocked: residual unchanged, empty trace.
    return {input, {}, false, {}};
  }
  best.d.require_valid("push_error result");
  return {std::move(best.d), std::move(best.trace), true,
          std::move(best.parked)};
}

// ---------------------------------------------------------------------------
// soundness harness
// ---------------------------------------------------------------------------

const std::vector<double>& default_angle_probes() {
  static const std::vector<double> probes = {std::numbers::pi / 3.0, 1.0, 2.41};
  return probes;
}

namespace {

struct InstanceGen {
  std::mt19937_64 rng;

  int uniform(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  }
  bool chance(double p) {
    return std::uniform_real_distribution<double>(0, 1)(rng) < p;
  }
  PhaseExpr phase(bool allow_symbol = true) {
    static const int dens[] = {1, 2, 3, 4};
    const int den = dens[uniform(0, 3)];
    PhaseExpr p = PhaseExpr::rational(uniform(0, 2 * den - 1), den);
    if (allow_symbol && chance(0.3))
      p = p + PhaseExpr::symbol(chance(0.5) ? "a" : "b", chance(0.5) ? 1 : -1);
    return p;
  }
  ConditionSet cond() {
    std::vector<std::string> sig;
    if (chance(0.4)) sig.push_back("s");
    if (chance(0.3)) sig.push_back("t");
    return ConditionSet(sig);
  }
  PhaseExpr pauli_phase() {
    return chance(0.5) ? PhaseExpr::zero() : PhaseExpr::pi();
  }

  // Attaches `n` boundary legs to v (alternating inputs/outputs).
  void legs(Diagram& d, VertexId v, int n) {
    for (int i = 0; i < n; ++i) {
      VertexId b = chance(0.5) ? d.add_input() : d.add_output();
      d.add_edge(v, b);
    }
  }
};

// Builds one LHS instance of the rule; returns the site to apply.
MatchSite generate_instance(InstanceGen& g, Diagram& d, RuleId rule) {
  const VertexType p = primary_colour(rule);
  const VertexType q = dual_type(p);
  switch (rule.rule) {
    case Rule::Spider: {
      ConditionSet shared = g.cond();
      PhaseExpr pa = g.phase();
      PhaseExpr pb = g.phase();
      if (!shared.empty()) {
        // The invariant disallows zero-phase conditional labels.
        if (pa.is_zero()) pa = PhaseExpr::pi();
        if (pb.is_zero()) pb = PhaseExpr::pi();
      }
      VertexId u = d.add_vertex(VertexKind::spider(p, pa, shared));
      VertexId v = d.add_vertex(VertexKind::spider(p, pb, shared));
      d.add_edge(u, v);
      if (g.chance(0.25)) d.add_edge(u, v);  // parallel edge becomes a loop
      g.legs(d, u, g.uniform(0, 3));
      g.legs(d, v, g.uniform(0, 3));
      return {rule, {u, v}};
    }
    case Rule::Identity: {
      VertexId v = d.add_vertex(VertexKind::spider(p));
      g.legs(d, v, 2);
      return {rule, {v}};
    }
    case Rule::AntiLoop: {
      VertexId v = d.add_vertex(VertexKind::spider(p, g.phase(), g.cond()));
      if (d.kind(v).phase.is_zero() && !d.kind(v).cond.empty())
        d.set_kind(v, VertexKind::spider(p, PhaseExpr::pi(), g.cond()));
      d.add_edge(v, v);
      g.legs(d, v, g.uniform(0, 3));
      return {rule, {v}};
    }
    case Rule::Copying: {
      VertexId v = d.add_vertex(VertexKind::spider(p, g.phase(), {}));
      VertexId pt = d.add_vertex(VertexKind::spider(q));
      d.add_edge(pt, v);
      g.legs(d, v, g.uniform(1, 3));
      return {rule, {pt, v}};
    }
    case Rule::PiCommute: {
      ConditionSet u_cond = g.cond();
      PhaseExpr v_phase = u_cond.empty() ? g.phase() : g.pauli_phase();
      ConditionSet v_cond = g.cond();
      if (v_phase.is_zero()) v_cond = {};
      VertexId v = d.add_vertex(VertexKind::spider(p, v_phase, v_cond));
      VertexId mv = d.add_vertex(VertexKind::spider(q, PhaseExpr::pi(), u_cond));
      d.add_edge(mv, v);
      g.legs(d, mv, 1);
      g.legs(d, v, g.uniform(0, 3));
      return {rule, {mv, v}};
    }
    case Rule::AlphaCommute: {
      VertexId v = d.add_vertex(VertexKind::spider(p, g.phase(), {}));
      VertexId mv = d.add_vertex(VertexKind::spider(p, g.phase(), {}));
      d.add_edge(mv, v);
      g.legs(d, mv, 1);
      g.legs(d, v, g.uniform(0, 3));
      return {rule, {mv, v}};
    }
    case Rule::Bialgebra: {
      VertexId z1 = d.add_vertex(VertexKind::spider(p));
      VertexId z2 = d.add_vertex(VertexKind::spider(p));
      VertexId x1 = d.add_vertex(VertexKind::spider(q));
      VertexId x2 = d.add_vertex(VertexKind::spider(q));
      for (VertexId z : {z1, z2})
        for (VertexId x : {x1, x2}) d.add_edge(z, x);
      g.legs(d, z1, 1);
      g.legs(d, z2, 1);
      g.legs(d, x1, 1);
      g.legs(d, x2, 1);
      return {rule, {z1, z2, x1, x2}};
    }
    case Rule::Hopf: {
      if (g.chance(0.5)) {
        VertexId u = d.add_vertex(VertexKind::spider(p, g.phase(), g.cond()));
        VertexId v = d.add_vertex(VertexKind::spider(q, g.phase(), g.cond()));
        for (VertexId w : {u, v})
          if (d.kind(w).phase.is_zero() && !d.kind(w).cond.empty())
            d.set_kind(w, VertexKind::spider(d.kind(w).type, PhaseExpr::pi(),
                                             d.kind(w).cond));
        d.add_edge(u, v);
        d.add_edge(u, v);
        g.legs(d, u, g.uniform(0, 2));
        g.legs(d, v, g.uniform(0, 2));
        return {rule, {u, v}};
      }
      VertexId u = d.add_vertex(VertexKind::spider(p, g.phase(), {}));
      VertexId v = d.add_vertex(VertexKind::spider(p, g.phase(), {}));
      VertexId h1 = d.add_vertex(VertexKind::h());
      VertexId h2 = d.add_vertex(VertexKind::h());
      d.add_edge(u, h1);
      d.add_edge(h1, v);
      d.add_edge(u, h2);
      d.add_edge(h2, v);
      g.legs(d, u, g.uniform(0, 2));
      g.legs(d, v, g.uniform(0, 2));
      return {rule, {u, v, h1, h2}};
    }
    case Rule::HCommute: {
      VertexId v = d.add_vertex(VertexKind::spider(q, g.phase(), g.cond()));
      if (d.kind(v).phase.is_zero() && !d.kind(v).cond.empty())
        d.set_kind(v, VertexKind::spider(q, PhaseExpr::pi(), d.kind(v).cond));
      const int n = g.uniform(1, 4);
      for (int i = 0; i < n; ++i) {
        VertexId b = g.chance(0.5) ? d.add_input() : d.add_output();
        if (g.chance(0.5)) {
          VertexId h = d.add_vertex(VertexKind::h());
          d.add_edge(v, h);
          d.add_edge(h, b);
        } else {
          d.add_edge(v, b);
        }
      }
      return {rule, {v}};
    }
    case Rule::HCancel: {
      VertexId h1 = d.add_vertex(VertexKind::h());
      VertexId h2 = d.add_vertex(VertexKind::h());
      d.add_edge(h1, h2);
      VertexId b1 = d.add_input();
      VertexId b2 = d.add_output();
      d.add_edge(b1, h1);
      d.add_edge(h2, b2);
      return {rule, {h1, h2}};
    }
  }
  throw RewriteError("unreachable");
}

}  // namespace

SoundnessReport check_rule_soundness(RuleId rule, int trials, double tol,
                                     std::uint64_t seed) {
  SoundnessReport report;
  report.rule = rule;
  report.trials = trials;
  InstanceGen gen{std::mt19937_64(seed ^ (std::hash<std::string>{}(rule.name())))};

  for (int i = 0; i < trials; ++i) {
    Diagram lhs;
    MatchSite site = generate_instance(gen, lhs, rule);
    Json failure;
    try {
      Diagram rhs = apply(lhs, site);
      std::set<std::string> sig_union;
      for (const auto& s : lhs.signal_set()) sig_union.insert(s);
      for (const auto& s : rhs.signal_set()) sig_union.insert(s);
      std::vector<std::string> signals(sig_union.begin(), sig_union.end());

      std::set<std::string> var_union;
      for (const auto& s : lhs.angle_variables()) var_union.insert(s);

      bool ok = true;
      for (double probe : default_angle_probes()) {
        AngleAssignment a;
        int idx = 0;
        for (const auto& name : var_union) a[name] = probe + 0.37 * idx++;
        SuperOp sl = eval_superop(lhs, a, signals);
        SuperOp sr = eval_superop(rhs, a, signals);
        if (!superop_equal_up_to_scalar(sl, sr, tol)) {
          ok = false;
          break;
        }
        if (var_union.empty()) break;
      }
      if (!ok) {
        failure["lhs"] = to_json(lhs);
        failure["rhs"] = to_json(rhs);
      }
    } catch (const std::exception& ex) {
      failure["lhs"] = to_json(lhs);
      failure["error"] = ex.what();
    }
    if (!failure.is_null()) {
      ++report.failures;
      if (report.counterexamples.size() < 5)
        report.counterexamples.push_back(std::move(failure));
    }
  }
  return report;
}

}  // namespace zx
