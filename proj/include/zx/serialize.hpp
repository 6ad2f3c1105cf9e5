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

#pragma once

#include <string>

#include <json.hpp>

#include "zx/diagram.hpp"

namespace zx {

using Json = nlohmann::ordered_json;

/// Canonical diagram JSON: vertices sorted by id, edges sorted with u <= v,
/// parallel edges repeated, self-loops as [v, v].
Json to_json(const Diagram& d);
Diagram diagram_from_json(const Json& j);

/// Graphviz rendering: Z green ellipse, X red ellipse, H yellow square,
/// boundary point.
std::string to_dot(const Diagram& d);

Json to_json(const PhaseExpr& p);
PhaseExpr phase_from_json(const Json& j);

Json to_json(const Valuation& v);
Valuation valuation_from_json(const Json& j);

}  // namespace zx
