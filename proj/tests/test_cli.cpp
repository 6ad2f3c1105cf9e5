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

#include <cstdio>
#include <cstring>
#include <cstdlib>
#include <string>

namespace {

struct RunResult {
  int status = -1;
  std::string output;
};

RunResult run(const std::string& args) {
  const char* bin = std::getenv("ZXVERIFY_BIN");
  REQUIRE(bin != nullptr);
  const std::string cmd = std::string(bin) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[512];
  while (fgets(buf, sizeof buf, pipe)) r.output += buf;
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string corpus(const std::string& name) {
  const char* dir = std::getenv("ZXVERIFY_CORPUS");
  REQUIRE(dir != nullptr);
  return std::string(dir) + "/" + name;
}

}  // namespace

TEST_CASE("exit codes follow the contract on the bundled corpus") {
  CHECK(run("verify " + corpus("teleport.mc")).status == 0);
  CHECK(run("verify " + corpus("nflow.mc")).status == 1);
  CHECK(run("flow " + corpus("nflow.mc")).status == 1);
  CHECK(run("flow " + corpus("cx.mc")).status == 0);
  CHECK(run("check " + corpus("hadamard.mc")).status == 0);
  CHECK(run("extract " + corpus("nonuniform.mc")).status == 1);
  CHECK(run("verify /nonexistent.mc").status == 2);
}

TEST_CASE("check reports violations with a negative verdict, not an error") {
  const std::string tmp = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR")
                                                            : "/tmp");
  const std::string bad = tmp + "/zxverify_illformed.mc";
  {
    FILE* f = fopen(bad.c_str(), "w");
    REQUIRE(f != nullptr);
    const char* text = "inputs: 1,2; outputs: 2;\nX 2 {1}\nM 1 0\n";
    fwrite(text, 1, strlen(text), f);
    fclose(f);
  }
  RunResult r = run("check " + bad);
  CHECK(r.status == 1);
  CHECK(r.output.find("condition 3") != std::string::npos);
  std::remove(bad.c_str());
}

TEST_CASE("verify output names the verdict") {
  RunResult r = run("verify " + corpus("nonuniform.mc"));
  CHECK(r.status == 0);
  CHECK(r.output.find("proved-deterministic") != std::string::npos);
  CHECK(r.output.find("semantic-fallback") != std::string::npos);
}

TEST_CASE("JSON outputs are byte-stable across runs") {
  const std::string args = "verify " + corpus("cx.mc") + " --format json";
  RunResult first = run(args);
  RunResult second = run(args);
  CHECK(first.status == 0);
  CHECK(first.output == second.output);
  CHECK_FALSE(first.output.empty());

  const std::string eval_args =
      "eval " + corpus("nflow.mc") + " --format json --probes 1.0";
  CHECK(run(eval_args).output == run(eval_args).output);
}

TEST_CASE("rewrite reads diagram JSON files") {
  // Round-trip a diagram through the tool: eval a .zxg written from the
  // rewrite output of a pattern.
  const std::string tmp = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR")
                                                            : "/tmp");
  const std::string zxg = tmp + "/zxverify_cli_test.zxg";
  RunResult r =
      run("rewrite " + corpus("hadamard.mc") + " --strategy fuse --format json");
  CHECK(r.status == 0);
  // Extract the diagram object from the JSON output.
  auto pos = r.output.find("\"diagram\": ");
  REQUIRE(pos != std::string::npos);
  std::string diagram = r.output.substr(pos + 11);
  // Trim the trailing brace of the wrapper object.
  auto end = diagram.rfind('}');
  diagram = diagram.substr(0, end);
  {
    FILE* f = fopen(zxg.c_str(), "w");
    REQUIRE(f != nullptr);
    fwrite(diagram.data(), 1, diagram.size(), f);
    fclose(f);
  }
  RunResult eval = run("eval " + zxg + " --format json");
  CHECK(eval.status == 0);
  CHECK(eval.output.find("kraus") != std::string::npos);
  std::remove(zxg.c_str());
}
