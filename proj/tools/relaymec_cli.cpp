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

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "relaymec/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Minimum-energy task offloading through a relay to a base station"};
  app.require_subcommand(1);

  relaymec::RunConfig config;
  std::string output;
  std::string gantt;
  std::vector<std::string> tolerances;
  std::vector<std::string> sweep;

  auto common = [&](CLI::App* sub, bool solves) {
    sub->add_option("--scenario", config.scenario_path, "Scenario JSON file")
        ->required();
    sub->add_option("--out", output, "Write the result here instead of stdout");
    if (!solves) return;
    sub->add_option("--gantt", gantt, "Also write the schedule as Gantt CSV");
    sub->add_flag("--oracle", config.oracle, "Attach a brute-force cross-check");
    sub->add_option("--tol", tolerances,
                    "Tolerance override name=value (bisection, tie, golden, "
                    "barrier_gap)");
  };
  for (const char* name : {"solve-case1", "solve-case2", "oracle-check", "gantt"}) {
    common(app.add_subcommand(name, std::string("Run ") + name), true);
  }
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Solve across a parameter range");
  common(sweep_cmd, true);
  sweep_cmd->add_option("--sweep", sweep, "<field> <lo> <hi> <steps>")
      ->expected(4)
      ->required();
  common(app.add_subcommand("validate", "Check a scenario file"), false);

  CLI11_PARSE(app, argc, argv);

  const std::string name = app.get_subcommands().front()->get_name();
  config.command = *relaymec::parse_command(name);
  if (!output.empty()) config.output_path = output;
  if (!gantt.empty()) config.gantt_path = gantt;
  for (const std::string& t : tolerances) {
    const auto eq = t.find('=');
    try {
      if (eq == std::string::npos) throw std::invalid_argument(t);
      config.tolerances[t.substr(0, eq)] = std::stod(t.substr(eq + 1));
    } catch (const std::exception&) {
      std::cerr << "error: --tol expects name=value, got '" << t << "'\n";
      return relaymec::kExitInputError;
    }
  }
  if (!sweep.empty()) {
    try {
      config.sweep_var = sweep[0];
      config.sweep_range = relaymec::SweepRange{std::stod(sweep[1]), std::stod(sweep[2]),
                                                std::stoi(sweep[3])};
    } catch (const std::exception&) {
      std::cerr << "error: --sweep expects <field> <lo> <hi> <steps>\n";
      return relaymec::kExitInputError;
    }
  }
  return relaymec::run(config, std::cout, std::cerr);
}
