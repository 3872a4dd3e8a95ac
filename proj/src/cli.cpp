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

#include "relaymec/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "relaymec/case1_solver.hpp"
#include "relaymec/case2_solver.hpp"
#include "relaymec/io.hpp"
#include "relaymec/oracle.hpp"
#include "relaymec/timeline.hpp"

namespace relaymec {

namespace {

struct Options {
  Case1Options case1;
  Case2Options case2;
};

Options options_from(const std::map<std::string, double>& tolerances) {
  Options o;
  for (const auto& [name, value] : tolerances) {
    if (!(value > 0.0)) throw InputError("tolerance '" + name + "' must be positive");
    if (name == "bisection") {
      o.case1.bisection.rel_tol = value;
      o.case2.bisection.rel_tol = value;
    } else if (name == "tie") {
      o.case1.tie_rel_tol = value;
      o.case2.tie_rel_tol = value;
    } else if (name == "golden") {
      o.case2.golden_rel_tol = value;
    } else if (name == "barrier_gap") {
      o.case2.barrier.gap_tol = value;
    } else {
      throw InputError("unknown tolerance '" + name +
                       "' (expected bisection, tie, golden or barrier_gap)");
    }
  }
  return o;
}

// Either solution kind, or the reason none exists.
struct Outcome {
  std::optional<Case1Solution> case1;
  std::optional<Case2Solution> case2;
  std::string reason;

  bool ok() const { return case1 || case2; }
  double energy() const { return case1 ? case1->lower.energy : case2->lower.energy; }
};

Outcome solve(const Scenario& s, const Options& o) {
  Outcome out;
  if (s.relay_busy()) {
    auto r = solve_case2(s, o.case2);
    if (r) {
      out.case2 = r.value();
    } else {
      out.reason = r.reason() + " (constraints: deadlines.t_s_th, deadlines.t_r_th)";
    }
  } else {
    auto r = solve_case1(s, o.case1);
    if (r) {
      out.case1 = r.value();
    } else {
      out.reason = r.reason() + " (constraint: deadlines.t_s)";
    }
  }
  return out;
}

Json solution_json(const Outcome& o, const Scenario& s) {
  return o.case1 ? solution_to_json(*o.case1, s) : solution_to_json(*o.case2, s);
}

Timeline timeline_of(const Outcome& o, const Scenario& s) {
  return o.case1 ? build_timeline(*o.case1, s) : build_timeline(*o.case2, s);
}

Json oracle_json(const Outcome& o, const Scenario& s) {
  Json j;
  double reference = 0.0;
  if (o.case1) {
    auto r = oracle::case1_reference(o.case1->split, s);
    if (!r) {
      j["status"] = r.reason();
      return j;
    }
    reference = r->energy;
    j["method"] = "per-task grid";
  } else {
    oracle::SchemeReferenceOptions opts;
    opts.coarse_points = 12;
    opts.refine_points = 7;
    opts.rounds = 30;
    auto r = oracle::scheme_reference(o.case2->scheme, o.case2->indices, s, opts);
    if (!r) {
      j["status"] = r.reason();
      return j;
    }
    reference = r->energy;
    j["method"] = "full-variable grid";
  }
  const double solver = o.energy();
  j["status"] = "ok";
  j["solver_energy_j"] = round12(solver);
  j["oracle_energy_j"] = round12(reference);
  j["relative_delta"] =
      round12(reference != 0.0 ? (solver - reference) / reference : solver - reference);
  return j;
}

std::string format12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_text(const std::optional<std::string>& path, const std::string& text,
                std::ostream& fallback) {
  if (!path) {
    fallback << text;
    return;
  }
  std::ofstream f(*path, std::ios::binary);
  if (!f) throw InputError(*path + ": cannot open for writing");
  f << text;
}

int run_validate(const Scenario& s, const RunConfig& cfg, std::ostream& out) {
  const auto violations = validate_scenario(s);
  std::ostringstream text;
  for (const Violation& v : violations) {
    text << (v.severity == Severity::kError ? "error: " : "warning: ") << v.field
         << ": " << v.message << "\n";
  }
  if (violations.empty()) text << "ok\n";
  write_text(cfg.output_path, text.str(), out);
  return has_errors(violations) ? kExitInputError : kExitOk;
}

int run_sweep(const Scenario& base, const RunConfig& cfg, const Options& o,
              std::ostream& out) {
  const SweepRange r = *cfg.sweep_range;
  if (r.steps < 1) throw InputError("sweep needs at least one step");
  std::string csv = "value,energy,n1,n2,m1,scheme\n";
  for (int i = 0; i < r.steps; ++i) {
    const double v =
        r.steps == 1 ? r.lo : r.lo + (r.hi - r.lo) * i / (r.steps - 1);
    Scenario s = base;
    set_scenario_field(s, *cfg.sweep_var, v);
    csv += format12(v) + ",";
    if (has_errors(validate_scenario(s))) {
      csv += ",,,,invalid\n";
      continue;
    }
    const Outcome res = solve(s, o);
    if (!res.ok()) {
      csv += ",,,,infeasible\n";
    } else if (res.case1) {
      csv += format12(res.energy()) + "," + std::to_string(res.case1->split.n1) +
             "," + std::to_string(res.case1->split.n2) + ",,\n";
    } else {
      const Case2Indices& idx = res.case2->indices;
      csv += format12(res.energy()) + "," + std::to_string(idx.n1) + "," +
             std::to_string(idx.n2) + "," + std::to_string(idx.m1) + "," +
             scheme_name(res.case2->scheme) + "\n";
    }
  }
  write_text(cfg.output_path, csv, out);
  return kExitOk;
}

int dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const bool sweep = cfg.command == Command::kSweep;
  if (sweep != (cfg.sweep_var.has_value() && cfg.sweep_range.has_value())) {
    throw InputError(sweep ? "sweep needs --sweep <field> <lo> <hi> <steps>"
                           : "--sweep is only valid with the sweep command");
  }
  const Options o = options_from(cfg.tolerances);
  const Scenario s = load_scenario(cfg.scenario_path);
  if (cfg.command == Command::kValidate) return run_validate(s, cfg, out);

  const auto violations = validate_scenario(s);
  if (has_errors(violations)) {
    for (const Violation& v : violations) {
      if (v.severity == Severity::kError) {
        err << "error: " << v.field << ": " << v.message << "\n";
      }
    }
    return kExitInputError;
  }
  if (sweep) return run_sweep(s, cfg, o, out);
  if (cfg.command == Command::kSolveCase1 && s.relay_busy()) {
    throw InputError("solve-case1 needs a scenario without relay_tasks");
  }
  if (cfg.command == Command::kSolveCase2 && !s.relay_busy()) {
    throw InputError("solve-case2 needs a scenario with relay_tasks");
  }

  const Outcome res = solve(s, o);
  if (!res.ok()) {
    err << "infeasible: " << res.reason << "\n";
    return kExitInfeasible;
  }
  const Timeline timeline = timeline_of(res, s);
  if (cfg.gantt_path) write_text(cfg.gantt_path, gantt_csv(timeline), out);

  switch (cfg.command) {
    case Command::kGantt:
      write_text(cfg.output_path, gantt_csv(timeline), out);
      break;
    case Command::kOracleCheck:
      write_text(cfg.output_path, oracle_json(res, s).dump(2) + "\n", out);
      break;
    default: {
      Json doc = solution_json(res, s);
      const auto problems = verify(timeline);
      Json checks = Json::array();
      for (const TimelineViolation& v : problems) checks.push_back(v.rule + ": " + v.detail);
      doc["timeline_violations"] = checks;
      if (cfg.oracle) doc["oracle"] = oracle_json(res, s);
      write_text(cfg.output_path, doc.dump(2) + "\n", out);
      break;
    }
  }
  return kExitOk;
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
  for (Command c : {Command::kSolveCase1, Command::kSolveCase2, Command::kOracleCheck,
                    Command::kSweep, Command::kValidate, Command::kGantt}) {
    if (name == command_name(c)) return c;
  }
  return std::nullopt;
}

const char* command_name(Command command) {
  switch (command) {
    case Command::kSolveCase1:
      return "solve-case1";
    case Command::kSolveCase2:
      return "solve-case2";
    case Command::kOracleCheck:
      return "oracle-check";
    case Command::kSweep:
      return "sweep";
    case Command::kValidate:
      return "validate";
    case Command::kGantt:
      return "gantt";
  }
  return "?";
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(config, out, err);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
  } catch (const ModelDomainError& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitInputError;
}

}  // namespace relaymec
