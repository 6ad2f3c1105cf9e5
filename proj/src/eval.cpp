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

#include "zx/eval.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

namespace zx {

namespace {

constexpr std::size_t kMaxRank = 16;  // desk-scale cap on open wire indices

using WireId = int;

struct Tensor {
  std::vector<WireId> wires;  // distinct labels; wire k = bit k of the index
  Eigen::VectorXcd data;      // 2^wires.size() entries

  std::size_t rank() const { return wires.size(); }
};

Tensor scalar_tensor(Complex value) {
  Tensor t;
  t.data = Eigen::VectorXcd::Constant(1, value);
  return t;
}

void check_rank(std::size_t rank) {
  if (rank > kMaxRank)
    throw EvalError("intermediate tensor exceeds " + std::to_string(kMaxRank) +
                    " wire indices; diagram too large for the dense oracle");
}

Tensor make_generator(const VertexKind& k, const std::vector<WireId>& wires,
                      const AngleAssignment& a) {
  check_rank(wires.size());
  const std::size_t n = wires.size();
  Tensor t;
  t.wires = wires;
  t.data = Eigen::VectorXcd::Zero(std::int64_t{1} << n);
  switch (k.type) {
    case VertexType::Z: {
      const Complex ph = std::polar(1.0, k.phase.to_radians(a));
      t.data[0] = 1.0;
      const std::size_t last = (std::size_t{1} << n) - 1;
      t.data[static_cast<std::int64_t>(last)] += ph;
      break;
    }
    case VertexType::X: {
      const Complex ph = std::polar(1.0, k.phase.to_radians(a));
      const double norm = std::pow(2.0, -static_cast<double>(n) / 2.0);
      for (std::size_t idx = 0; idx < (std::size_t{1} << n); ++idx) {
        const double sign = std::popcount(idx) % 2 == 0 ? 1.0 : -1.0;
        t.data[static_cast<std::int64_t>(idx)] = norm * (1.0 + ph * sign);
      }
      break;
    }
    case VertexType::H: {
      if (n != 2) throw EvalError("H vertex with degree != 2");
      const double s = 1.0 / std::numbers::sqrt2;
      t.data[0] = s;
      t.data[1] = s;
      t.data[2] = s;
      t.data[3] = -s;
      break;
    }
    case VertexType::Boundary:
      throw EvalError("boundary vertex has no generator tensor");
  }
  return t;
}

Tensor identity_tensor(WireId a, WireId b) {
  Tensor t;
  t.wires = {a, b};
  t.data = Eigen::VectorXcd::Zero(4);
  t.data[0] = 1.0;
  t.data[3] = 1.0;
  return t;
}

// Sums over all wires common to both tensors.
Tensor contract(const Tensor& lhs, const Tensor& rhs) {
  std::vector<WireId> shared;
  for (WireId w : lhs.wires)
    if (std::find(rhs.wires.begin(), rhs.wires.end(), w) != rhs.wires.end())
      shared.push_back(w);

  std::vector<WireId> out_wires;
  for (WireId w : lhs.wires)
    if (std::find(shared.begin(), shared.end(), w) == shared.end())
      out_wires.push_back(w);
  const std::size_t lhs_open = out_wires.size();
  for (WireId w : rhs.wires)
    if (std::find(shared.begin(), shared.end(), w) == shared.end())
      out_wires.push_back(w);
  check_rank(out_wires.size());

  auto bit_positions = [](const std::vector<WireId>& wires,
                          const std::vector<WireId>& of) {
    std::vector<int> pos;
    for (WireId w : of)
      pos.push_back(static_cast<int>(
          std::find(wires.begin(), wires.end(), w) - wires.begin()));
    return pos;
  };
  const std::vector<WireId> l_open(out_wires.begin(),
                                   out_wires.begin() + static_cast<long>(lhs_open));
  const std::vector<WireId> r_open(out_wires.begin() + static_cast<long>(lhs_open),
                                   out_wires.end());
  const auto l_open_pos = bit_positions(lhs.wires, l_open);
  const auto r_open_pos = bit_positions(rhs.wires, r_open);
  const auto l_shared_pos = bit_positions(lhs.wires, shared);
  const auto r_shared_pos = bit_positions(rhs.wires, shared);

  Tensor out;
  out.wires = out_wires;
  out.data = Eigen::VectorXcd::Zero(std::int64_t{1} << out_wires.size());
  const std::size_t n_out = out_wires.size();
  const std::size_t n_shared = shared.size();
  for (std::size_t idx = 0; idx < (std::size_t{1} << n_out); ++idx) {
    Complex acc = 0.0;
    for (std::size_t s = 0; s < (std::size_t{1} << n_shared); ++s) {
      std::size_t li = 0, ri = 0;
      for (std::size_t k = 0; k < lhs_open; ++k)
        li |= ((idx >> k) & 1) << l_open_pos[k];
      for (std::size_t k = lhs_open; k < n_out; ++k)
        ri |= ((idx >> k) & 1) << r_open_pos[k - lhs_open];
      for (std::size_t k = 0; k < n_shared; ++k) {
        li |= ((s >> k) & 1) << l_shared_pos[k];
        ri |= ((s >> k) & 1) << r_shared_pos[k];
      }
      acc += lhs.data[static_cast<std::int64_t>(li)] *
             rhs.data[static_cast<std::int64_t>(ri)];
    }
    out.data[static_cast<std::int64_t>(idx)] = acc;
  }
  return out;
}

// Partial trace of two legs of one tensor (self-loop contraction).
Tensor trace_pair(const Tensor& t, WireId a, WireId b) {
  std::vector<WireId> out_wires;
  for (WireId w : t.wires)
    if (w != a && w != b) out_wires.push_back(w);
  int pa = static_cast<int>(std::find(t.wires.begin(), t.wires.end(), a) -
                            t.wires.begin());
  int pb = static_cast<int>(std::find(t.wires.begin(), t.wires.end(), b) -
                            t.wires.begin());
  std::vector<int> keep;
  for (std::size_t k = 0; k < t.wires.size(); ++k)
    if (static_cast<int>(k) != pa && static_cast<int>(k) != pb)
      keep.push_back(static_cast<int>(k));

  Tensor out;
  out.wires = out_wires;
  out.data = Eigen::VectorXcd::Zero(std::int64_t{1} << out_wires.size());
  for (std::size_t idx = 0; idx < (std::size_t{1} << out_wires.size()); ++idx) {
    Complex acc = 0.0;
    for (std::size_t bit = 0; bit < 2; ++bit) {
      std::size_t src = 0;
      for (std::size_t k = 0; k < keep.size(); ++k)
        src |= ((idx >> k) & 1) << keep[k];
      src |= bit << pa;
      src |= bit << pb;
      acc += t.data[static_cast<std::int64_t>(src)];
    }
    out.data[static_cast<std::int64_t>(idx)] = acc;
  }
  return out;
}

}  // namespace

EvalResult eval_parts(const Diagram& d, const AngleAssignment& a) {
  for (const auto& [id, k] : d.vertices())
    if (k.is_conditional())
      throw EvalError("eval_matrix requires an unconditional diagram");
  d.require_valid("eval");

  // One wire per edge occurrence; boundary vertices expose their wire.
  std::map<VertexId, std::vector<std::pair<WireId, bool>>> legs;  // (wire, self)
  std::map<VertexId, WireId> boundary_wire;
  std::vector<Tensor> pool;
  WireId next_wire = 0;

  const auto& edges = d.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto [u, v] = edges[e];
    const bool u_b = d.is_boundary(u), v_b = d.is_boundary(v);
    if (u == v) {
      WireId w1 = next_wire++, w2 = next_wire++;
      legs[u].emplace_back(w1, true);
      legs[u].emplace_back(w2, true);
      continue;
    }
    WireId w = next_wire++;
    if (u_b && v_b) {
      // A bare wire between two boundary vertices.
      WireId w2 = next_wire++;
      pool.push_back(identity_tensor(w, w2));
      boundary_wire[u] = w;
      boundary_wire[v] = w2;
      continue;
    }
    if (u_b) boundary_wire[u] = w; else legs[u].emplace_back(w, false);
    if (v_b) boundary_wire[v] = w; else legs[v].emplace_back(w, false);
  }

  for (const auto& [id, k] : d.vertices()) {
    if (k.type == VertexType::Boundary) continue;
    std::vector<WireId> wires;
    std::vector<WireId> self_wires;
    for (auto [w, self] : legs[id]) {
      wires.push_back(w);
      if (self) self_wires.push_back(w);
    }
    Tensor t = make_generator(k, wires, a);
    for (std::size_t i = 0; i + 1 < self_wires.size(); i += 2)
      t = trace_pair(t, self_wires[i], self_wires[i + 1]);
    pool.push_back(std::move(t));
  }

  // Wires not owned by boundaries are internal and must be summed.
  std::set<WireId> open;
  for (const auto& [b, w] : boundary_wire) open.insert(w);
  auto has_closed_wire = [&](const Tensor& t) {
    return std::any_of(t.wires.begin(), t.wires.end(),
                       [&](WireId w) { return open.find(w) == open.end(); });
  };

  while (true) {
    // Greedy: the smallest pending tensor with an internal wire goes first.
    std::size_t best = pool.size();
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (!has_closed_wire(pool[i])) continue;
      if (best == pool.size() || pool[i].rank() < pool[best].rank()) best = i;
    }
    if (best == pool.size()) break;
    WireId w = 0;
    for (WireId cand : pool[best].wires)
      if (open.find(cand) == open.end()) { w = cand; break; }
    std::size_t partner = pool.size();
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (i == best) continue;
      if (std::find(pool[i].wires.begin(), pool[i].wires.end(), w) !=
          pool[i].wires.end()) { partner = i; break; }
    }
    if (partner == pool.size())
      throw EvalError("dangling internal wire (corrupt diagram)");
    Tensor merged = contract(pool[best], pool[partner]);
    if (best < partner) std::swap(best, partner);
    pool.erase(pool.begin() + static_cast<long>(best));
    pool.erase(pool.begin() + static_cast<long>(partner));
    pool.push_back(std::move(merged));
  }

  // Rank-0 tensors are values of closed components.
  EvalResult result;
  Tensor open_tensor = scalar_tensor(1.0);
  for (auto& t : pool) {
    if (t.rank() == 0)
      result.scalar *= t.data[0];
    else
      open_tensor = contract(open_tensor, t);  // disjoint: kron
  }

  // Lay out open wires as [outputs, inputs], first boundary = most significant.
  const std::size_t m = d.outputs().size(), n = d.inputs().size();
  check_rank(m + n);
  result.matrix = DenseOperator::Zero(std::int64_t{1} << m, std::int64_t{1} << n);
  std::vector<int> out_pos(m), in_pos(n);
  auto wire_pos = [&](VertexId b) {
    auto it = boundary_wire.find(b);
    if (it == boundary_wire.end())
      throw EvalError("boundary vertex without a wire");
    return static_cast<int>(std::find(open_tensor.wires.begin(),
                                      open_tensor.wires.end(),
                                      it->second) - open_tensor.wires.begin());
  };
  for (std::size_t j = 0; j < m; ++j) out_pos[j] = wire_pos(d.outputs()[j]);
  for (std::size_t j = 0; j < n; ++j) in_pos[j] = wire_pos(d.inputs()[j]);
  for (std::int64_t row = 0; row < result.matrix.rows(); ++row) {
    for (std::int64_t col = 0; col < result.matrix.cols(); ++col) {
      std::size_t idx = 0;
      for (std::size_t j = 0; j < m; ++j)
        idx |= static_cast<std::size_t>((row >> (m - 1 - j)) & 1) << out_pos[j];
      for (std::size_t j = 0; j < n; ++j)
        idx |= static_cast<std::size_t>((col >> (n - 1 - j)) & 1) << in_pos[j];
      result.matrix(row, col) = open_tensor.data[static_cast<std::int64_t>(idx)];
    }
  }
  return result;
}

DenseOperator eval_matrix(const Diagram& d, const AngleAssignment& a) {
  return eval_parts(d, a).total();
}

bool equal_up_to_scalar(const DenseOperator& a, const DenseOperator& b,
                        double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw EvalError("equal_up_to_scalar: shape mismatch");
  std::int64_t br = 0, bc = 0;
  const double bmax = b.cwiseAbs().maxCoeff(&br, &bc);
  const double amax = a.cwiseAbs().maxCoeff();
  // A matrix whose entries all sit within the tolerance is the zero matrix;
  // zero is equal only to zero.
  if (bmax <= tol || amax <= tol) return bmax <= tol && amax <= tol;
  const Complex lambda = a(br, bc) / b(br, bc);
  return (a - lambda * b).cwiseAbs().maxCoeff() <= tol;
}

DenseOperator SuperOp::choi() const {
  if (kraus.empty()) return DenseOperator::Zero(1, 1);
  const std::int64_t dim = kraus.front().second.size();
  DenseOperator c = DenseOperator::Zero(dim, dim);
  for (const auto& [v, k] : kraus) {
    Eigen::Map<const Eigen::VectorXcd> vec(k.data(), k.size());
    c += vec * vec.adjoint();
  }
  return c;
}

SuperOp eval_superop(const Diagram& d, const AngleAssignment& a,
                     std::optional<std::vector<std::string>> signals) {
  SuperOp s;
  s.signals = signals ? std::move(*signals) : d.signal_set();
  {
    auto present = d.signal_set();
    for (const auto& sig : present)
      if (std::find(s.signals.begin(), s.signals.end(), sig) == s.signals.end())
        throw EvalError("signal set override misses signal " + sig);
  }
  for (const auto& v : Valuation::enumerate(s.signals))
    s.kraus.emplace_back(v, eval_matrix(d.apply_valuation(v), a));
  return s;
}

bool superop_equal_up_to_scalar(const SuperOp& a, const SuperOp& b, double tol) {
  return equal_up_to_scalar(a.choi(), b.choi(), tol);
}

// ---------------------------------------------------------------------------
// gates
// ---------------------------------------------------------------------------

namespace {

Diagram one_qubit_gate(const VertexKind& k) {
  Diagram d;
  VertexId in = d.add_input();
  VertexId out = d.add_output();
  VertexId v = d.add_vertex(k);
  d.add_edge(in, v);
  d.add_edge(v, out);
  return d;
}

}  // namespace

Diagram gate(GateName name, std::optional<PhaseExpr> params) {
  const bool is_phase_gate = name == GateName::Zphase || name == GateName::Xphase;
  if (is_phase_gate != params.has_value())
    throw DiagramError("phase parameter required exactly for phase gates");
  switch (name) {
    case GateName::H:
      return one_qubit_gate(VertexKind::h());
    case GateName::Zphase:
      return one_qubit_gate(VertexKind::z(*params));
    case GateName::Xphase:
      return one_qubit_gate(VertexKind::x(*params));
    case GateName::CX: {
      Diagram d;
      VertexId in1 = d.add_input(), in2 = d.add_input();
      VertexId out1 = d.add_output(), out2 = d.add_output();
      VertexId zc = d.add_vertex(VertexKind::z());
      VertexId xt = d.add_vertex(VertexKind::x());
      d.add_edge(in1, zc);
      d.add_edge(zc, out1);
      d.add_edge(in2, xt);
      d.add_edge(xt, out2);
      d.add_edge(zc, xt);
      return d;
    }
    case GateName::CZ: {
      Diagram d;
      VertexId in1 = d.add_input(), in2 = d.add_input();
      VertexId out1 = d.add_output(), out2 = d.add_output();
      VertexId z1 = d.add_vertex(VertexKind::z());
      VertexId z2 = d.add_vertex(VertexKind::z());
      VertexId h = d.add_vertex(VertexKind::h());
      d.add_edge(in1, z1);
      d.add_edge(z1, out1);
      d.add_edge(in2, z2);
      d.add_edge(z2, out2);
      d.add_edge(z1, h);
      d.add_edge(h, z2);
      return d;
    }
    case GateName::BellPrep:
      // H on the first qubit, then CX onto the second.
      return Diagram::compose(
          Diagram::tensor(gate(GateName::H), identity_diagram(1)),
          gate(GateName::CX));
  }
  throw DiagramError("unknown gate");
}

GateName gate_name_from_string(const std::string& s) {
  if (s == "H") return GateName::H;
  if (s == "Zphase" || s == "RZ") return GateName::Zphase;
  if (s == "Xphase" || s == "RX") return GateName::Xphase;
  if (s == "CX") return GateName::CX;
  if (s == "CZ") return GateName::CZ;
  if (s == "BellPrep") return GateName::BellPrep;
  throw DiagramError("unknown gate name: " + s);
}

Diagram zero_state(std::size_t n) {
  Diagram d;
  for (std::size_t i = 0; i < n; ++i) {
    VertexId out = d.add_output();
    VertexId pt = d.add_vertex(VertexKind::x());  // X(0) point = sqrt(2)|0>
    d.add_edge(pt, out);
  }
  return d;
}

// ---------------------------------------------------------------------------
// matrix formats
// ---------------------------------------------------------------------------

std::string matrix_to_text(const DenseOperator& m) {
  std::ostringstream os;
  os.precision(17);
  os << m.rows() << " " << m.cols() << "\n";
  for (std::int64_t r = 0; r < m.rows(); ++r) {
    for (std::int64_t c = 0; c < m.cols(); ++c) {
      if (c) os << " ";
      const Complex z = m(r, c);
      os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "j";
    }
    os << "\n";
  }
  return os.str();
}

DenseOperator matrix_from_text(const std::string& text) {
  std::istringstream is(text);
  std::int64_t rows = 0, cols = 0;
  if (!(is >> rows >> cols)) throw EvalError("bad matrix header");
  DenseOperator m(rows, cols);
  for (std::int64_t r = 0; r < rows; ++r)
    for (std::int64_t c = 0; c < cols; ++c) {
      std::string tok;
      if (!(is >> tok)) throw EvalError("matrix text too short");
      if (tok.empty() || tok.back() != 'j')
        throw EvalError("bad matrix entry: " + tok);
      tok.pop_back();
      // Split at the sign that separates real and imaginary parts.
      std::size_t split = std::string::npos;
      for (std::size_t i = 1; i < tok.size(); ++i) {
        if ((tok[i] == '+' || tok[i] == '-') && tok[i - 1] != 'e' &&
            tok[i - 1] != 'E')
          split = i;
      }
      if (split == std::string::npos) throw EvalError("bad matrix entry: " + tok);
      m(r, c) = Complex(std::stod(tok.substr(0, split)),
                        std::stod(tok.substr(split)));
    }
  return m;
}

Json matrix_to_json(const DenseOperator& m) {
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  Json entries = Json::array();
  for (std::int64_t r = 0; r < m.rows(); ++r)
    for (std::int64_t c = 0; c < m.cols(); ++c)
      entries.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
  j["entries"] = std::move(entries);
  return j;
}

DenseOperator kron(const DenseOperator& a, const DenseOperator& b) {
  DenseOperator out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::int64_t i = 0; i < a.rows(); ++i)
    for (std::int64_t j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace zx
