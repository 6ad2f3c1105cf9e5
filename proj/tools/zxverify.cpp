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

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "zx/verify.hpp"

namespace fs = std::filesystem;
using namespace zx;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitInputError = 2;

struct Options {
  std::string input;
  std::string format = "text";
  double tol = 1e-9;
  std::string probes_text;
  int signal_bound = 12;
  std::uint64_t seed = 0;
};

struct Input {
  bool is_pattern = false;
  Pattern pattern;
  Diagram diagram;
};

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream in(path);
  if (!in.good()) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Input load(const std::string& path, bool translate = false) {
  Input in;
  const std::string text = slurp(path);
  if (path != "-" && fs::path(path).extension() == ".zxg") {
    in.diagram = diagram_from_json(Json::parse(text));
    return in;
  }
  in.is_pattern = true;
  in.pattern = parse_pattern(text);
  // Translation requires well-formedness; commands that only inspect the
  // pattern skip it so they can report violations themselves.
  if (translate) in.diagram = to_diagram(in.pattern).diagram;
  return in;
}

std::vector<double> parse_probes(const Options& opt) {
  std::string text = opt.probes_text;
  if (text.empty()) {
    if (const char* env = std::getenv("ZXVERIFY_PROBES")) text = env;
  }
  if (text.empty()) return default_angle_probes();
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok == "pi/3")
      out.push_back(std::numbers::pi / 3);
    else if (tok == "pi/2")
      out.push_back(std::numbers::pi / 2);
    else
      out.push_back(std::stod(tok));
  }
  if (out.empty()) throw std::runtime_error("empty probe list");
  return out;
}

AngleAssignment probe_assignment(const Diagram& d, double probe) {
  AngleAssignment a;
  int idx = 0;
  for (const auto& name : d.angle_variables()) a[name] = probe + 0.37 * idx++;
  return a;
}

void emit(const Json& j, const Options& opt, const std::string& text_form) {
  if (opt.format == "json")
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text_form;
}

// -- subcommand bodies -------------------------------------------------------

int run_parse(const Options& opt) {
  Input in = load(opt.input);
  if (!in.is_pattern) throw std::runtime_error("parse expects a pattern file");
  const std::string canon = print_pattern(in.pattern);
  Json j;
  j["canonical"] = canon;
  emit(j, opt, canon);
  return kExitOk;
}

int run_check(const Options& opt) {
  Input in = load(opt.input);
  if (!in.is_pattern) {
    auto bad = in.diagram.validate();
    Json j;
    j["violations"] = bad;
    std::string text;
    for (const auto& b : bad) text += b + "\n";
    emit(j, opt, bad.empty() ? "well-formed\n" : text);
    return bad.empty() ? kExitOk : kExitNegative;
  }
  auto bad = check_wellformed(in.pattern);
  Json j;
  j["violations"] = bad;
  std::string text;
  for (const auto& b : bad) text += b + "\n";
  emit(j, opt, bad.empty() ? "well-formed\n" : text);
  return bad.empty() ? kExitOk : kExitNegative;
}

int run_flow(const Options& opt) {
  Input in = load(opt.input);
  if (!in.is_pattern) throw std::runtime_error("flow expects a pattern file");
  OpenGraph g = geometry(in.pattern);
  auto fl = find_flow(g);
  Json j;
  Json edges = Json::array();
  for (const auto& [u, v] : g.edges) edges.push_back(Json::array({u, v}));
  j["geometry"] = Json{{"vertices", g.vertices},
                       {"edges", std::move(edges)},
                       {"inputs", g.inputs},
                       {"outputs", g.outputs}};
  if (fl) {
    j["flow"] = to_json(*fl);
    std::string text = "flow found\n";
    for (const auto& [u, v] : fl->f)
      text += "  f(" + std::to_string(u) + ") = " + std::to_string(v) + "\n";
    emit(j, opt, text);
    return kExitOk;
  }
  j["flow"] = nullptr;
  emit(j, opt, "no flow\n");
  return kExitNegative;
}

int verdict_exit(Verdict v) {
  return v == Verdict::ProvedDeterministic ? kExitOk : kExitNegative;
}

int run_verify_one(const Pattern& p, const Options& opt) {
  VerifyOptions vopt;
  vopt.tol = opt.tol;
  vopt.probes = parse_probes(opt);
  vopt.signal_bound = opt.signal_bound;
  DeterminismReport report = verify_determinism(p, vopt);
  Json j = report.to_json();
  j["seed"] = opt.seed;
  std::string text = to_string(report.verdict) + " (" +
                     to_string(report.method) + ")\n  " + report.detail + "\n";
  if (report.witness)
    text += "  witness: " + report.witness->first.to_string() + " vs " +
            report.witness->second.to_string() + "\n";
  emit(j, opt, text);
  return verdict_exit(report.verdict);
}

int run_verify_corpus(const std::string& dir, const Options& opt) {
  int mismatches = 0, files = 0;
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.path().extension() == ".mc") paths.push_back(entry.path());
  std::sort(paths.begin(), paths.end());
  for (const auto& path : paths) {
    ++files;
    Pattern p = parse_pattern(slurp(path.string()));
    VerifyOptions vopt;
    vopt.tol = opt.tol;
    vopt.probes = parse_probes(opt);
    vopt.signal_bound = opt.signal_bound;
    DeterminismReport report = verify_determinism(p, vopt);
    std::string got = to_string(report.verdict);
    std::string expect = "(none)";
    fs::path side = path;
    side.replace_extension(".expect");
    if (fs::exists(side)) {
      expect = slurp(side.string());
      while (!expect.empty() && (expect.back() == '\n' || expect.back() == ' '))
        expect.pop_back();
    }
    const bool ok = got == expect;
    if (!ok) ++mismatches;
    std::cout << (ok ? "[ OK ] " : "[FAIL] ") << path.filename().string()
              << ": " << got << " (expected " << expect << ")\n";
  }
  std::cout << files - mismatches << "/" << files << " verdicts match (seed "
            << opt.seed << ")\n";
  return mismatches == 0 ? kExitOk : kExitNegative;
}

int run_eval(const Options& opt, const std::string& branch) {
  Input in = load(opt.input, /*translate=*/true);
  const auto probes = parse_probes(opt);
  AngleAssignment a = probe_assignment(in.diagram, probes.front());

  if (branch == "positive" && in.is_pattern) {
    BranchMaps maps = branch_maps(in.pattern, a);
    emit(matrix_to_json(maps.positive()), opt, matrix_to_text(maps.positive()));
    return kExitOk;
  }
  if (in.diagram.is_unconditional()) {
    EvalResult parts = eval_parts(in.diagram, a);
    Json j = matrix_to_json(parts.total());
    j["scalar"] = Json::array({parts.scalar.real(), parts.scalar.imag()});
    emit(j, opt, matrix_to_text(parts.total()));
    return kExitOk;
  }
  SuperOp s = eval_superop(in.diagram, a);
  Json j;
  j["signals"] = s.signals;
  Json terms = Json::array();
  std::string text;
  for (const auto& [v, k] : s.kraus) {
    Json term;
    term["valuation"] = to_json(v);
    term["matrix"] = matrix_to_json(k);
    terms.push_back(std::move(term));
    text += v.to_string() + ":\n" + matrix_to_text(k);
  }
  j["kraus"] = std::move(terms);
  emit(j, opt, text);
  return kExitOk;
}

int run_extract(const Options& opt, bool strict) {
  Input in = load(opt.input);
  if (!in.is_pattern) throw std::runtime_error("extract expects a pattern file");
  try {
    auto gates = extract_circuit(in.pattern, strict);
    Json j;
    Json arr = Json::array();
    for (const auto& g : gates) arr.push_back(g.to_text());
    j["gates"] = std::move(arr);
    emit(j, opt, gates_to_text(gates));
    return kExitOk;
  } catch (const FlowError& e) {
    std::cerr << "extract: " << e.what() << "\n";
    return kExitNegative;
  }
}

int run_rewrite(const Options& opt, const std::string& rule,
                const std::string& strategy) {
  Input in = load(opt.input, /*translate=*/true);
  Diagram d = in.diagram;
  RewriteTrace trace;
  if (!rule.empty()) {
    RuleId id = RuleId::from_name(rule);
    auto sites = find_matches(d, id);
    if (!sites.empty()) {
      d = apply(d, sites.front());
      trace.append(id.name(), sites.front().anchors, d);
    }
  } else {
    auto [simplified, tr] = simplify(d, strategy_from_string(strategy));
    d = std::move(simplified);
    trace = std::move(tr);
  }
  Json j;
  j["trace"] = trace.to_json();
  j["diagram"] = to_json(d);
  if (opt.format == "dot") {
    std::cout << to_dot(d);
  } else {
    emit(j, opt,
         std::to_string(trace.steps.size()) + " rewrite step(s)\n" + to_dot(d));
  }
  return kExitOk;
}

int run_soundness(const Options& opt, int trials) {
  bool all_ok = true;
  Json per_rule = Json::array();
  for (const RuleId& rule : RuleId::all()) {
    SoundnessReport report = check_rule_soundness(rule, trials, opt.tol, opt.seed);
    all_ok = all_ok && report.failures == 0;
    Json j;
    j["rule"] = rule.name();
    j["trials"] = report.trials;
    j["failures"] = report.failures;
    if (!report.counterexamples.empty())
      j["counterexamples"] = report.counterexamples;
    per_rule.push_back(std::move(j));
    if (opt.format != "json")
      std::cout << (report.failures == 0 ? "[ OK ] " : "[FAIL] ") << rule.name()
                << ": " << report.failures << "/" << report.trials
                << " failures\n";
  }
  if (opt.format == "json") {
    Json j;
    j["seed"] = opt.seed;
    j["rules"] = std::move(per_rule);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "seed " << opt.seed << "\n";
  }
  return all_ok ? kExitOk : kExitNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ZX-calculus rewriting, measurement-pattern verification and "
               "circuit extraction"};
  app.require_subcommand(1);

  Options opt;
  std::string branch, rule, strategy = "fuse", corpus_dir;
  bool strict = false;
  int trials = 200;

  auto add_common = [&](CLI::App* cmd, bool needs_input) {
    if (needs_input)
      cmd->add_option("input", opt.input, "pattern (.mc) or diagram (.zxg); - for stdin")
          ->required();
    cmd->add_option("--format", opt.format, "text, json or dot")
        ->check(CLI::IsMember({"text", "json", "dot"}));
    cmd->add_option("--tol", opt.tol, "numeric tolerance");
    cmd->add_option("--probes", opt.probes_text,
                    "comma-separated angle probes (env ZXVERIFY_PROBES)");
    cmd->add_option("--signal-bound", opt.signal_bound,
                    "max signals for branch enumeration");
    cmd->add_option("--seed", opt.seed, "seed for randomized suites");
  };

  auto* parse_cmd = app.add_subcommand("parse", "echo the canonical pattern");
  add_common(parse_cmd, true);
  auto* check_cmd = app.add_subcommand("check", "report well-formedness");
  add_common(check_cmd, true);
  auto* flow_cmd = app.add_subcommand("flow", "geometry and causal flow");
  add_common(flow_cmd, true);
  auto* verify_cmd = app.add_subcommand("verify", "determinism verification");
  verify_cmd->add_option("input", opt.input, "pattern file (.mc)");
  verify_cmd->add_option("--corpus", corpus_dir,
                         "run every .mc in a directory against its .expect");
  add_common(verify_cmd, false);
  auto* eval_cmd = app.add_subcommand("eval", "matrix / branch / channel");
  eval_cmd->add_option("--branch", branch, "positive for the positive branch");
  add_common(eval_cmd, true);
  auto* extract_cmd = app.add_subcommand("extract", "gate list from a flow proof");
  extract_cmd->add_flag("--strict", strict, "convert CZ to CX form");
  add_common(extract_cmd, true);
  auto* rewrite_cmd = app.add_subcommand("rewrite", "apply a rule or strategy");
  rewrite_cmd->add_option("--rule", rule, "rule name, e.g. spider, hopf-dual");
  rewrite_cmd->add_option("--strategy", strategy, "fuse or full");
  add_common(rewrite_cmd, true);
  auto* sound_cmd = app.add_subcommand("soundness", "rule soundness suite");
  sound_cmd->add_option("--trials", trials, "random instances per rule");
  add_common(sound_cmd, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (parse_cmd->parsed()) return run_parse(opt);
    if (check_cmd->parsed()) return run_check(opt);
    if (flow_cmd->parsed()) return run_flow(opt);
    if (verify_cmd->parsed()) {
      if (!corpus_dir.empty()) return run_verify_corpus(corpus_dir, opt);
      if (opt.input.empty()) throw std::runtime_error("verify needs an input");
      return run_verify_one(parse_pattern(slurp(opt.input)), opt);
    }
    if (eval_cmd->parsed()) return run_eval(opt, branch);
    if (extract_cmd->parsed()) return run_extract(opt, strict);
    if (rewrite_cmd->parsed()) return run_rewrite(opt, rule, strategy);
    if (sound_cmd->parsed()) return run_soundness(opt, trials);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
