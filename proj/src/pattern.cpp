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

#include "zx/pattern.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace zx {

Command Command::init(int q) {
  Command c;
  c.kind = Kind::Init;
  c.qubit = q;
  return c;
}

Command Command::entangle(int q1, int q2) {
  if (q1 == q2) throw DiagramError("entangling command needs distinct qubits");
  Command c;
  c.kind = Kind::Entangle;
  c.qubit = std::min(q1, q2);
  c.qubit2 = std::max(q1, q2);
  return c;
}

Command Command::measure(int q, PhaseExpr angle, ConditionSet s,
                         ConditionSet t) {
  Command c;
  c.kind = Kind::Measure;
  c.qubit = q;
  c.angle = std::move(angle);
  c.s_set = std::move(s);
  c.t_set = std::move(t);
  return c;
}

Command Command::correct_x(int q, ConditionSet domain) {
  Command c;
  c.kind = Kind::CorrectX;
  c.qubit = q;
  c.domain = std::move(domain);
  return c;
}

Command Command::correct_z(int q, ConditionSet domain) {
  Command c;
  c.kind = Kind::CorrectZ;
  c.qubit = q;
  c.domain = std::move(domain);
  return c;
}

// ---------------------------------------------------------------------------
// parsing
// ---------------------------------------------------------------------------

namespace {

struct LineScanner {
  const std::string& text;
  int line;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(line, static_cast<int>(pos) + 1, msg);
  }
  void skip_ws() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  }
  bool done() {
    skip_ws();
    return pos >= text.size();
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  bool consume(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!consume(c)) fail(std::string("expected '") + c + "'");
  }
  std::string word() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) ||
            text[pos] == '_' || text[pos] == '/' || text[pos] == '*' ||
            text[pos] == '-' || text[pos] == '+'))
      ++pos;
    if (pos == start) fail("expected a token");
    return text.substr(start, pos - start);
  }
  int qubit() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
      ++pos;
    if (pos == start) fail("expected a qubit id");
    int q = std::stoi(text.substr(start, pos - start));
    if (q <= 0) fail("qubit ids are positive integers");
    return q;
  }
  std::vector<int> qubit_list() {
    std::vector<int> out;
    skip_ws();
    if (peek() == ';' || peek() == '\0') return out;
    out.push_back(qubit());
    while (consume(',')) out.push_back(qubit());
    return out;
  }
  ConditionSet signal_set() {
    expect('{');
    std::vector<std::string> sigs;
    if (!consume('}')) {
      do {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                text[pos] == '_'))
          ++pos;
        if (pos == start) fail("expected a signal name");
        sigs.push_back(text.substr(start, pos - start));
      } while (consume(','));
      expect('}');
    }
    return ConditionSet(std::move(sigs));
  }
};

}  // namespace

Pattern parse_pattern(const std::string& text) {
  Pattern p;
  bool have_header = false;
  std::set<int> declared_inputs, declared_outputs;
  std::set<int> initialised, measured;

  std::istringstream stream(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos)
      raw = raw.substr(0, hash);
    while (!raw.empty() && (raw.back() == '\r' || raw.back() == ' ' ||
                            raw.back() == '\t'))
      raw.pop_back();
    LineScanner s{raw, line_no};
    if (s.done()) continue;

    if (raw.find("inputs:") != std::string::npos ||
        raw.find("outputs:") != std::string::npos) {
      if (have_header) s.fail("duplicate header");
      have_header = true;
      while (!s.done()) {
        std::string key = s.word();
        s.expect(':');
        auto qs = s.qubit_list();
        if (key == "inputs")
          declared_inputs.insert(qs.begin(), qs.end());
        else if (key == "outputs")
          declared_outputs.insert(qs.begin(), qs.end());
        else
          s.fail("unknown header key: " + key);
        s.expect(';');
      }
      continue;
    }

    std::string op = s.word();
    if (op == "N") {
      int q = s.qubit();
      if (initialised.count(q)) s.fail("duplicate N on qubit " + std::to_string(q));
      initialised.insert(q);
      p.commands.push_back(Command::init(q));
    } else if (op == "E") {
      int q1 = s.qubit();
      int q2 = s.qubit();
      if (q1 == q2) s.fail("E needs two distinct qubits");
      if (measured.count(q1) || measured.count(q2))
        s.fail("E applied to an already-measured qubit");
      p.commands.push_back(Command::entangle(q1, q2));
    } else if (op == "M") {
      int q = s.qubit();
      PhaseExpr angle;
      try {
        angle = PhaseExpr::parse(s.word());
      } catch (const PhaseError& e) {
        s.fail(e.what());
      }
      ConditionSet ss, ts;
      while (!s.done()) {
        std::string key = s.word();
        s.expect('=');
        if (key == "s")
          ss = s.signal_set();
        else if (key == "t")
          ts = s.signal_set();
        else
          s.fail("unknown measurement option: " + key);
      }
      measured.insert(q);
      p.commands.push_back(Command::measure(q, angle, ss, ts));
    } else if (op == "X" || op == "Z") {
      int q = s.qubit();
      ConditionSet dom = s.signal_set();
      p.commands.push_back(op == "X" ? Command::correct_x(q, dom)
                                     : Command::correct_z(q, dom));
    } else {
      s.fail("unknown command: " + op);
    }
    if (!s.done()) s.fail("trailing input");
  }

  for (const auto& c : p.commands) {
    p.qubits.insert(c.qubit);
    if (c.kind == Command::Kind::Entangle) p.qubits.insert(c.qubit2);
  }
  p.qubits.insert(declared_inputs.begin(), declared_inputs.end());
  p.qubits.insert(declared_outputs.begin(), declared_outputs.end());

  if (have_header) {
    p.inputs = std::move(declared_inputs);
    p.outputs = std::move(declared_outputs);
  } else {
    for (int q : p.qubits) {
      if (!initialised.count(q)) p.inputs.insert(q);
      if (!measured.count(q)) p.outputs.insert(q);
    }
  }
  return p;
}

// ---------------------------------------------------------------------------
// printing
// ---------------------------------------------------------------------------

namespace {

std::string join_qubits(const std::set<int>& qs) {
  std::string out;
  for (int q : qs) {
    if (!out.empty()) out += ",";
    out += std::to_string(q);
  }
  return out;
}

std::string set_text(const ConditionSet& c) {
  std::string out = "{";
  const auto& sigs = c.signals();
  for (std::size_t i = 0; i < sigs.size(); ++i) {
    if (i) out += ",";
    out += sigs[i];
  }
  return out + "}";
}

}  // namespace

std::string print_pattern(const Pattern& p) {
  std::ostringstream os;
  os << "inputs: " << join_qubits(p.inputs) << "; outputs: "
     << join_qubits(p.outputs) << ";\n";
  for (const auto& c : p.commands) {
    switch (c.kind) {
      case Command::Kind::Init:
        os << "N " << c.qubit << "\n";
        break;
      case Command::Kind::Entangle:
        os << "E " << c.qubit << " " << c.qubit2 << "\n";
        break;
      case Command::Kind::Measure:
        os << "M " << c.qubit << " " << c.angle.to_string();
        if (!c.s_set.empty()) os << " s=" << set_text(c.s_set);
        if (!c.t_set.empty()) os << " t=" << set_text(c.t_set);
        os << "\n";
        break;
      case Command::Kind::CorrectX:
        os << "X " << c.qubit << " " << set_text(c.domain) << "\n";
        break;
      case Command::Kind::CorrectZ:
        os << "Z " << c.qubit << " " << set_text(c.domain) << "\n";
        break;
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// well-formedness
// ---------------------------------------------------------------------------

std::vector<std::string> check_wellformed(const Pattern& p) {
  std::vector<std::string> bad;
  auto note = [&](int cond, std::size_t index, const std::string& msg) {
    bad.push_back("condition " + std::to_string(cond) + " at command " +
                  std::to_string(index) + ": " + msg);
  };

  std::set<int> touched, initialised, measured;
  std::set<std::string> available_signals;
  for (std::size_t i = 0; i < p.commands.size(); ++i) {
    const Command& c = p.commands[i];
    std::vector<int> on = {c.qubit};
    if (c.kind == Command::Kind::Entangle) on.push_back(c.qubit2);

    for (int q : on)
      if (measured.count(q))
        note(2, i, "qubit " + std::to_string(q) + " was already measured");

    switch (c.kind) {
      case Command::Kind::Init:
        if (touched.count(c.qubit))
          note(1, i, "initialisation is not the first command on qubit " +
                         std::to_string(c.qubit));
        if (initialised.count(c.qubit))
          note(1, i, "duplicate initialisation of qubit " +
                         std::to_string(c.qubit));
        initialised.insert(c.qubit);
        break;
      case Command::Kind::Measure: {
        if (measured.count(c.qubit))
          note(2, i, "qubit " + std::to_string(c.qubit) +
                         " measured twice (signals must be fresh)");
        for (const ConditionSet* cs : {&c.s_set, &c.t_set})
          for (const auto& s : cs->signals())
            if (!available_signals.count(s))
              note(3, i, "signal " + s + " is not an earlier outcome");
        measured.insert(c.qubit);
        available_signals.insert(Pattern::signal_of(c.qubit));
        break;
      }
      case Command::Kind::CorrectX:
      case Command::Kind::CorrectZ:
        for (const auto& s : c.domain.signals())
          if (!available_signals.count(s))
            note(3, i, "signal " + s + " is not an earlier outcome");
        break;
      case Command::Kind::Entangle:
        break;
    }
    for (int q : on) touched.insert(q);
  }

  for (int q : p.qubits) {
    const bool is_input = p.inputs.count(q) != 0;
    if (is_input == initialised.count(q))
      bad.push_back("boundary: qubit " + std::to_string(q) +
                    (is_input ? " is declared input but initialised"
                              : " is neither input nor initialised"));
    const bool is_output = p.outputs.count(q) != 0;
    if (is_output == measured.count(q))
      bad.push_back("boundary: qubit " + std::to_string(q) +
                    (is_output ? " is declared output but measured"
                               : " is neither output nor measured"));
  }
  for (int q : p.inputs)
    if (!p.qubits.count(q))
      bad.push_back("boundary: unknown input qubit " + std::to_string(q));
  for (int q : p.outputs)
    if (!p.qubits.count(q))
      bad.push_back("boundary: unknown output qubit " + std::to_string(q));
  return bad;
}

void require_wellformed(const Pattern& p) {
  auto bad = check_wellformed(p);
  if (!bad.empty()) throw DiagramError("ill-formed pattern: " + bad.front());
}

// ---------------------------------------------------------------------------
// standard form
// ---------------------------------------------------------------------------

namespace {

int command_class(const Command& c) {
  switch (c.kind) {
    case Command::Kind::Init: return 0;
    case Command::Kind::Entangle: return 1;
    default: return 2;  // measurements and corrections
  }
}

}  // namespace

bool is_standard_form(const Pattern& p) {
  int stage = 0;
  for (const auto& c : p.commands) {
    int cls = command_class(c);
    if (cls < stage) return false;
    stage = cls;
  }
  return true;
}

Pattern standardize(const Pattern& p) {
  require_wellformed(p);
  Pattern out = p;

  // Expand conditional measurements: ^s[M]^t == M Z^t X^s, i.e. the X and Z
  // corrections run immediately before the plain measurement.
  std::vector<Command> expanded;
  for (const auto& c : out.commands) {
    if (c.kind == Command::Kind::Measure &&
        (!c.s_set.empty() || !c.t_set.empty())) {
      if (!c.s_set.empty()) expanded.push_back(Command::correct_x(c.qubit, c.s_set));
      if (!c.t_set.empty()) expanded.push_back(Command::correct_z(c.qubit, c.t_set));
      expanded.push_back(Command::measure(c.qubit, c.angle));
    } else {
      expanded.push_back(c);
    }
  }
  out.commands = std::move(expanded);

  // Bubble initialisations and entangling commands leftward.  Moving an
  // entangling command across an X correction on one of its qubits emits the
  // partner Z correction behind it.
  const std::size_t guard =
      1000 + out.commands.size() * out.commands.size() * 4;
  std::size_t iterations = 0;
  bool changed = true;
  while (changed) {
    if (++iterations > guard)
      throw DiagramError("standardize did not converge");
    changed = false;
    auto& cmds = out.commands;
    for (std::size_t i = 0; i + 1 < cmds.size(); ++i) {
      const Command a = cmds[i];
      const Command b = cmds[i + 1];
      if (command_class(a) <= command_class(b)) continue;

      if (b.kind == Command::Kind::Init) {
        // Initialisation is first on its qubit, so a acts elsewhere.
        cmds[i] = b;
        cmds[i + 1] = a;
        changed = true;
        break;
      }
      if (b.kind == Command::Kind::Entangle) {
        if (a.kind == Command::Kind::CorrectX &&
            (a.qubit == b.qubit || a.qubit == b.qubit2)) {
          const int partner = a.qubit == b.qubit ? b.qubit2 : b.qubit;
          cmds[i] = b;
          cmds[i + 1] = Command::correct_z(partner, a.domain);
          cmds.insert(cmds.begin() + static_cast<std::ptrdiff_t>(i) + 2, a);
        } else {
          // Z corrections commute with the entangling command outright;
          // measurements and X corrections on other qubits are disjoint.
          cmds[i] = b;
          cmds[i + 1] = a;
        }
        changed = true;
        break;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// translation
// ---------------------------------------------------------------------------

Translation to_diagram(const Pattern& p) {
  require_wellformed(p);
  Translation t;
  Diagram& d = t.diagram;

  std::map<int, VertexId> attach;  // open end of each live wire
  for (int q : p.inputs) {
    VertexId b = d.add_input();
    t.input_boundary[q] = b;
    attach[q] = b;
  }

  auto append = [&](int q, const VertexKind& kind) {
    VertexId v = d.add_vertex(kind);
    auto it = attach.find(q);
    if (it == attach.end())
      throw DiagramError("command on a dead or uninitialised qubit " +
                         std::to_string(q));
    d.add_edge(it->second, v);
    attach[q] = v;
    return v;
  };

  for (const auto& c : p.commands) {
    switch (c.kind) {
      case Command::Kind::Init: {
        VertexId v = d.add_vertex(VertexKind::z());
        attach[c.qubit] = v;
        break;
      }
      case Command::Kind::Entangle: {
        VertexId z1 = append(c.qubit, VertexKind::z());
        VertexId z2 = append(c.qubit2, VertexKind::z());
        VertexId h = d.add_vertex(VertexKind::h());
        d.add_edge(z1, h);
        d.add_edge(h, z2);
        break;
      }
      case Command::Kind::Measure: {
        if (!c.s_set.empty())
          append(c.qubit, VertexKind::x(PhaseExpr::pi(), c.s_set));
        if (!c.t_set.empty())
          append(c.qubit, VertexKind::z(PhaseExpr::pi(), c.t_set));
        VertexId err = append(
            c.qubit, VertexKind::z(PhaseExpr::pi(),
                                   ConditionSet::single(Pattern::signal_of(c.qubit))));
        VertexId eff = append(c.qubit, VertexKind::z(-c.angle));
        t.measure_error[c.qubit] = err;
        t.measure_effect[c.qubit] = eff;
        attach.erase(c.qubit);
        break;
      }
      case Command::Kind::CorrectX:
        append(c.qubit, VertexKind::x(PhaseExpr::pi(), c.domain));
        break;
      case Command::Kind::CorrectZ:
        append(c.qubit, VertexKind::z(PhaseExpr::pi(), c.domain));
        break;
    }
  }

  for (int q : p.outputs) {
    VertexId b = d.add_output();
    t.output_boundary[q] = b;
    auto it = attach.find(q);
    if (it == attach.end())
      throw DiagramError("output qubit was measured: " + std::to_string(q));
    d.add_edge(it->second, b);
  }
  d.require_valid("pattern translation");
  return t;
}

OpenGraph geometry(const Pattern& p) {
  require_wellformed(p);
  OpenGraph g;
  for (int q : p.qubits) g.add_vertex(q);
  for (const auto& c : p.commands)
    if (c.kind == Command::Kind::Entangle) g.add_edge(c.qubit, c.qubit2);
  g.inputs = p.inputs;
  g.outputs = p.outputs;
  return g;
}

}  // namespace zx
