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
//
// End-to-end acceptance suite: one check per shipped guarantee, each printed
// as a single pass/fail line.  Run from ctest or directly with
// ZXVERIFY_CORPUS (and ZXVERIFY_BIN for criterion 10) in the environment.

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "support/statevec.hpp"
#include "zx/verify.hpp"

using namespace zx;

namespace {

struct CheckFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw CheckFailure(what);
}

std::string corpus_dir() {
  const char* dir = std::getenv("ZXVERIFY_CORPUS");
  if (dir) return dir;
  return "corpus";
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw CheckFailure("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Pattern corpus_pattern(const std::string& name) {
  return parse_pattern(slurp(corpus_dir() + "/" + name));
}

constexpr double kTolFine = 1e-12;
constexpr double kTol = 1e-9;

// -- criterion 1 -------------------------------------------------------------

void rule_soundness() {
  for (const RuleId& rule : RuleId::all()) {
    SoundnessReport report = check_rule_soundness(rule, 200, kTol, 0);
    require(report.failures == 0,
            rule.name() + ": " + std::to_string(report.failures) + "/" +
                std::to_string(report.trials) + " failures");
  }
}

// -- criterion 2 -------------------------------------------------------------

void teleportation() {
  Pattern p = corpus_pattern("teleport.mc");
  DeterminismReport report = verify_determinism(p);
  require(report.verdict == Verdict::ProvedDeterministic &&
              report.method == Method::FlowRewrite,
          "verdict " + to_string(report.verdict));

  SuperOp channel = eval_superop(to_diagram(p).diagram);
  SuperOp identity;
  identity.kraus.emplace_back(Valuation{}, DenseOperator::Identity(2, 2));
  require(superop_equal_up_to_scalar(channel, identity, kTol),
          "channel is not the identity up to scalar");
}

// -- criterion 3 -------------------------------------------------------------

void hadamard_pattern() {
  Pattern p = corpus_pattern("hadamard.mc");
  DeterminismReport report = verify_determinism(p);
  require(report.verdict == Verdict::ProvedDeterministic &&
              report.method == Method::FlowRewrite,
          "verdict " + to_string(report.verdict));

  BranchMaps maps = branch_maps(p);
  require(maps.branches.size() == 2, "expected two branches");
  const DenseOperator h = eval_matrix(gate(GateName::H));
  for (const auto& [v, m] : maps.branches)
    require(equal_up_to_scalar(m, h, kTol),
            "branch " + v.to_string() + " is not proportional to H");

  auto gates = extract_circuit(p);
  require(gates.size() == 1 && gates[0].name == "H",
          "extracted circuit is not [H]");
}

// -- criterion 4 -------------------------------------------------------------

void cnot_pattern() {
  Pattern p = corpus_pattern("cx.mc");
  DeterminismReport report = verify_determinism(p);
  require(report.verdict == Verdict::ProvedDeterministic &&
              report.method == Method::FlowRewrite,
          "verdict " + to_string(report.verdict));

  DenseOperator cx_ref(4, 4);
  cx_ref << 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0;
  require(equal_up_to_scalar(branch_maps(p).positive(), cx_ref, kTol),
          "positive branch is not proportional to the CX matrix");

  auto gates = extract_circuit(p);
  require(equal_up_to_scalar(eval_matrix(circuit_to_diagram(p, gates)), cx_ref,
                             kTol),
          "extracted circuit does not re-evaluate to CX");
}

// -- criterion 5 -------------------------------------------------------------

void no_flow_witness() {
  Pattern p = corpus_pattern("nflow.mc");
  require(!find_flow(geometry(p)).has_value(), "unexpected flow");
  DeterminismCheck check =
      semantic_determinism(p, {{"alpha", std::numbers::pi / 2}}, kTol);
  require(!check.deterministic, "no witness found at alpha = pi/2");
  require(check.witness.has_value(), "missing witness pair");
  require(check.gap >= 0.5, "witness gap " + std::to_string(check.gap) +
                                " below 0.5 after normalisation");
}

// -- criterion 6 -------------------------------------------------------------

void non_uniform_semantic() {
  Pattern p = corpus_pattern("nonuniform.mc");
  require(!find_flow(geometry(p)).has_value(), "unexpected flow");
  DeterminismReport report = verify_determinism(p);
  require(report.verdict == Verdict::ProvedDeterministic &&
              report.method == Method::SemanticFallback,
          "verdict " + to_string(report.verdict));
  for (double probe : {std::numbers::pi / 3, 1.0, 2.41}) {
    BranchMaps maps = branch_maps(p, {{"alpha", probe}});
    require(maps.branches.size() == 4, "expected four branches");
    for (const auto& [v, m] : maps.branches)
      require(equal_up_to_scalar(m, DenseOperator::Identity(2, 2), kTol),
              "branch " + v.to_string() + " is not proportional to identity");
  }
}

// -- criterion 7 -------------------------------------------------------------

void flow_oracle_equivalence() {
  std::atomic<long> disagreements{0};
  std::atomic<long> instances{0};

  for (int n = 1; n <= 6; ++n) {
    const int max_edges = n * (n - 1) / 2;
    std::vector<std::pair<int, int>> all_edges;
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j) all_edges.emplace_back(i, j);

    // Subsets of at most two vertices.
    std::vector<std::vector<int>> io_subsets;
    io_subsets.push_back({});
    for (int i = 1; i <= n; ++i) io_subsets.push_back({i});
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j) io_subsets.push_back({i, j});

    const long total_masks = 1L << max_edges;
    const unsigned n_threads =
        std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::thread> workers;
    for (unsigned t = 0; t < n_threads; ++t) {
      workers.emplace_back([&, t]() {
        for (long mask = static_cast<long>(t); mask < total_masks;
             mask += n_threads) {
          // Connectivity over all n vertices.
          std::vector<int> parent(n + 1);
          for (int i = 1; i <= n; ++i) parent[i] = i;
          std::function<int(int)> find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
          };
          int components = n;
          for (int e = 0; e < max_edges; ++e) {
            if (!(mask >> e & 1)) continue;
            int a = find(all_edges[e].first), b = find(all_edges[e].second);
            if (a != b) {
              parent[a] = b;
              --components;
            }
          }
          if (components != 1) continue;

          OpenGraph base;
          for (int i = 1; i <= n; ++i) base.add_vertex(i);
          for (int e = 0; e < max_edges; ++e)
            if (mask >> e & 1)
              base.add_edge(all_edges[e].first, all_edges[e].second);

          for (const auto& ins : io_subsets) {
            for (const auto& outs : io_subsets) {
              OpenGraph g = base;
              g.inputs = {ins.begin(), ins.end()};
              g.outputs = {outs.begin(), outs.end()};
              instances.fetch_add(1, std::memory_order_relaxed);
              auto greedy = find_flow(g);
              if (greedy) {
                if (!verify_flow(g, *greedy))
                  disagreements.fetch_add(1, std::memory_order_relaxed);
              } else if (brute_force_flow(g)) {
                disagreements.fetch_add(1, std::memory_order_relaxed);
              }
            }
          }
        }
      });
    }
    for (auto& w : workers) w.join();
  }
  require(disagreements == 0,
          std::to_string(disagreements.load()) + " disagreements over " +
              std::to_string(instances.load()) + " open graphs");
}

// -- criterion 8 -------------------------------------------------------------

void spider_normal_form() {
  std::mt19937_64 rng(0);
  auto uniform = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  for (int trial = 0; trial < 100; ++trial) {
    const VertexType colour = trial % 2 ? VertexType::X : VertexType::Z;
    const int n = uniform(1, 8);
    PhaseExpr sum;
    Diagram d;
    std::vector<VertexId> spiders;
    while (true) {
      d = Diagram();
      spiders.clear();
      sum = PhaseExpr::zero();
      for (int i = 0; i < n; ++i) {
        PhaseExpr phase = PhaseExpr::rational(uniform(0, 7), 4);
        sum = sum + phase;
        spiders.push_back(d.add_vertex(VertexKind::spider(colour, phase)));
      }
      if (!sum.is_zero()) break;  // keep the fused spider removable-free
    }
    // Random spanning tree plus a few extra edges (parallels allowed).
    for (int i = 1; i < n; ++i) d.add_edge(spiders[i], spiders[uniform(0, i - 1)]);
    for (int extra = uniform(0, 3); extra > 0; --extra)
      d.add_edge(spiders[uniform(0, n - 1)], spiders[uniform(0, n - 1)]);
    const int n_in = uniform(0, 2), n_out = uniform(1, 3);
    for (int i = 0; i < n_in; ++i)
      d.add_edge(d.add_input(), spiders[uniform(0, n - 1)]);
    for (int i = 0; i < n_out; ++i)
      d.add_edge(d.add_output(), spiders[uniform(0, n - 1)]);

    auto [fused, trace] = simplify(d, Strategy::Fuse);
    int remaining = 0;
    for (const auto& [id, k] : fused.vertices())
      if (k.is_spider()) {
        ++remaining;
        require(k.phase == sum, "fused phase " + k.phase.to_string() +
                                    " differs from the sum " + sum.to_string());
      }
    require(remaining == 1, "fused to " + std::to_string(remaining) +
                                " spiders instead of one");

    Diagram reference;
    VertexId v = reference.add_vertex(VertexKind::spider(colour, sum));
    for (int i = 0; i < n_in; ++i) reference.add_edge(reference.add_input(), v);
    for (int i = 0; i < n_out; ++i)
      reference.add_edge(reference.add_output(), v);
    require(equal_up_to_scalar(eval_matrix(fused), eval_matrix(reference), kTol),
            "fused matrix differs from the single spider");
  }
}

// -- criterion 9 -------------------------------------------------------------

void gate_identities() {
  Diagram czcz = Diagram::compose(gate(GateName::CZ), gate(GateName::CZ));
  require(equal_up_to_scalar(eval_matrix(czcz), DenseOperator::Identity(4, 4),
                             kTolFine),
          "CZ o CZ is not the identity");

  DenseOperator bell_ref(4, 1);
  bell_ref << 1, 0, 0, 1;
  DenseOperator bell =
      eval_matrix(Diagram::compose(zero_state(2), gate(GateName::BellPrep)));
  require(equal_up_to_scalar(bell, bell_ref, kTolFine),
          "Bell circuit does not prepare |00> + |11>");

  Diagram hh = Diagram::compose(gate(GateName::H), gate(GateName::H));
  require(equal_up_to_scalar(eval_matrix(hh), DenseOperator::Identity(2, 2),
                             kTolFine),
          "H o H is not the identity");
}

// -- criterion 10 ------------------------------------------------------------

void parser_round_trip() {
  for (const char* name :
       {"hadamard.mc", "cx.mc", "teleport.mc", "nflow.mc", "nonuniform.mc"}) {
    const std::string canonical =
        print_pattern(parse_pattern(slurp(corpus_dir() + "/" + name)));
    require(print_pattern(parse_pattern(canonical)) == canonical,
            std::string(name) + ": canonical text is not a fixed point");
  }

  // Malformed input through the command-line tool: exit 2, line:col cited.
  const char* bin = std::getenv("ZXVERIFY_BIN");
  require(bin != nullptr, "ZXVERIFY_BIN not set");
  const std::string bad = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR")
                                                            : "/tmp") +
                          "/zxverify_bad.mc";
  {
    std::ofstream out(bad);
    out << "N 1\nE 1\n";
  }
  const std::string cmd = std::string(bin) + " parse " + bad + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  require(pipe != nullptr, "cannot run the CLI");
  std::string output;
  char buf[256];
  while (fgets(buf, sizeof buf, pipe)) output += buf;
  const int status = pclose(pipe);
  require(WIFEXITED(status) && WEXITSTATUS(status) == 2,
          "malformed input did not exit with status 2");
  require(output.find("2:") != std::string::npos,
          "error message does not cite line:col; got: " + output);
  std::remove(bad.c_str());
}

// -- criterion 11 ------------------------------------------------------------

void branch_map_cross_oracle() {
  for (const char* name :
       {"hadamard.mc", "cx.mc", "teleport.mc", "nflow.mc", "nonuniform.mc"}) {
    Pattern p = corpus_pattern(name);
    AngleAssignment a{{"alpha", 1.0}};
    BranchMaps maps = branch_maps(p, a);
    for (const auto& [valuation, via_diagram] : maps.branches) {
      DenseOperator direct = zx::testing::simulate_branch(p, valuation, a);
      require(equal_up_to_scalar(via_diagram, direct, kTol),
              std::string(name) + " branch " + valuation.to_string() +
                  ": diagram and state-vector execution disagree");
    }
  }
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<void()> body;
  };
  const std::vector<Criterion> criteria = {
      {1, "rule soundness (10 rules x duals, 200 trials, tol 1e-9)",
       rule_soundness},
      {2, "teleportation: flow proof and identity channel", teleportation},
      {3, "one-qubit pattern: branches H, extract [H]", hadamard_pattern},
      {4, "CNOT pattern: positive branch and extraction", cnot_pattern},
      {5, "no-flow witness at alpha = pi/2 (gap >= 0.5)", no_flow_witness},
      {6, "deterministic no-flow pattern via semantic fallback",
       non_uniform_semantic},
      {7, "flow oracle equivalence on all open graphs (<= 6 vertices)",
       flow_oracle_equivalence},
      {8, "spider normal form on 100 random single-colour diagrams",
       spider_normal_form},
      {9, "gate identities at tol 1e-12", gate_identities},
      {10, "parser round-trip and line:col errors", parser_round_trip},
      {11, "branch maps match state-vector execution", branch_map_cross_oracle},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string error;
    try {
      c.body();
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    char line[512];
    std::snprintf(line, sizeof line, "[%s] criterion %2d: %s (%.1fs)%s%s",
                  error.empty() ? "PASS" : "FAIL", c.id, c.name, seconds,
                  error.empty() ? "" : " -- ", error.c_str());
    std::cout << line << std::endl;
    if (!error.empty()) ++failures;
  }
  if (failures) {
    std::cout << failures << " criterion(s) failed" << std::endl;
    return 1;
  }
  std::cout << "all criteria passed" << std::endl;
  return 0;
}
