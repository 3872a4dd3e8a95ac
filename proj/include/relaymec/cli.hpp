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

// Command dispatch behind the relaymec command-line tool.

#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace relaymec {

enum class Command { kSolveCase1, kSolveCase2, kOracleCheck, kSweep, kValidate, kGantt };

std::optional<Command> parse_command(std::string_view name);
const char* command_name(Command command);

struct SweepRange {
  double lo = 0.0;
  double hi = 0.0;
  int steps = 0;
};

struct RunConfig {
  Command command = Command::kValidate;
  std::string scenario_path;
  std::optional<std::string> output_path;  // stdout when absent
  std::optional<std::string> gantt_path;
  std::optional<std::string> sweep_var;
  std::optional<SweepRange> sweep_range;
  bool oracle = false;
  // bisection, tie, golden, barrier_gap
  std::map<std::string, double> tolerances;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitInfeasible = 2;

int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace relaymec
