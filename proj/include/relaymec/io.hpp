// Copyright 2026 The relaymec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Scenario and solution documents.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "json.hpp"
#include "relaymec/case1_solver.hpp"
#include "relaymec/case2_solver.hpp"
#include "relaymec/model.hpp"

namespace relaymec {

using Json = nlohmann::ordered_json;

// Malformed or unreadable input. Parse errors carry "line L, column C".
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Scenario parse_scenario(std::string_view text, std::string_view source = "<input>");
Scenario load_scenario(const std::string& path);
Json scenario_to_json(const Scenario& s);

// Sets a scalar scenario parameter by its JSON name (t_s, B, kappa_md, ...).
void set_scenario_field(Scenario& s, const std::string& field, double value);

// Round to 12 significant digits.
double round12(double v);

Json solution_to_json(const Case1Solution& sol, const Scenario& s);
Json solution_to_json(const Case2Solution& sol, const Scenario& s);

using SolutionDocument = std::variant<Case1Solution, Case2Solution>;
SolutionDocument parse_solution(std::string_view text);

}  // namespace relaymec
