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

// Energy-optimal offloading when the relay also runs a task chain of its
// own. The device chain is split at (n1, n2) and the relay chain at m1
// (tasks m1..M go to the base station). The three uploads share one band
// and are serialised in one of three orders:
//
//   S1: relay upload, then device -> relay, then relay -> BS
//   S2: device -> relay, then relay -> BS, then relay upload
//   S3: device -> relay, then relay upload, then relay -> BS
//
// CPU caps on the device and relay are not enforced in this case; they
// are reported on the returned solution instead.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "relaymec/barrier.hpp"
#include "relaymec/dual_search.hpp"
#include "relaymec/model.hpp"
#include "relaymec/parallel.hpp"
#include "relaymec/result.hpp"

namespace relaymec {

enum class SchemeId { kS1 = 1, kS2 = 2, kS3 = 3 };

const char* scheme_name(SchemeId scheme);

struct Case2Indices {
  int n1 = 1;  // first device task run at the relay
  int n2 = 1;  // first device task run at the base station
  int m1 = 1;  // first relay task run at the base station

  friend bool operator==(const Case2Indices&, const Case2Indices&) = default;
};

// Throws std::invalid_argument unless 1 <= n1 <= n2 <= N+1, 1 <= m1 <= M+1.
void check_indices(Case2Indices indices, const Scenario& s);

// Per-index constants: transmitted data and block workloads.
struct Case2Blocks {
  double d1 = 0.0;          // device -> relay, d^s_{n1}
  double d2 = 0.0;          // relay -> BS for the device, d^s_{n2}
  double d3 = 0.0;          // relay -> BS for the relay, d^r_{m1}
  double l_local = 0.0;     // device tasks 1..n1-1
  double l_relay = 0.0;     // device tasks n1..n2-1
  double l_own = 0.0;       // relay tasks 1..m1-1
  double l_bs_device = 0.0; // device tasks n2..N
  double l_bs_relay = 0.0;  // relay tasks m1..M
};

Case2Blocks case2_blocks(Case2Indices indices, const Scenario& s);

struct Case2LowerSolution {
  double tau1 = 0.0;
  double tau2 = 0.0;
  double tau3 = 0.0;
  double T1 = 0.0;  // device compute block
  double T2 = 0.0;  // relay computing device tasks
  double T3 = 0.0;  // relay computing its own tasks
  double tau_s = 0.0;  // BS time reserved for device tasks
  double tau0 = 0.0;   // S3 gap before the relay upload, 0 unless freed
  double t_c = 0.0;    // S2 only: time the BS turns to relay work
  double psi = 0.0;      // device deadline multiplier
  double lambda = 0.0;   // ordering constraint multiplier
  double lambda2 = 0.0;  // second S3 ordering constraint
  double eta1 = 0.0;     // BS device-work multiplier, per cycle
  double eta2 = 0.0;     // BS relay-work multiplier, per cycle
  double energy = 0.0;
  std::string path;  // "closed-form" or "barrier"
};

struct Case2EnergyBreakdown {
  double tx_md = 0.0;
  double tx_relay_device = 0.0;
  double tx_relay_own = 0.0;
  double cpu_md = 0.0;
  double cpu_relay_device = 0.0;
  double cpu_relay_own = 0.0;

  double total() const {
    return tx_md + tx_relay_device + tx_relay_own + cpu_md + cpu_relay_device +
           cpu_relay_own;
  }
};

struct Case2Solution {
  SchemeId scheme = SchemeId::kS1;
  Case2Indices indices;
  Case2LowerSolution lower;
  Case2EnergyBreakdown energy_breakdown;
  std::vector<std::string> cap_violations;
};

struct Case2Options {
  DualSearchOptions bisection{};
  convex::Options barrier{};
  // S1 outer search over tau3.
  int tau3_log_points = 32;
  int tau3_linear_points = 16;
  int max_refinements = 8;
  double golden_rel_tol = 1e-10;
  double tie_rel_tol = 1e-12;
  // Test hook: lets the S3 solver choose the gap tau0 instead of fixing it
  // at zero.
  bool scheme3_free_gap = false;
  ExecutionMode mode = ExecutionMode::kParallel;
};

// Relay-compute duration paired with `tau3` at an S1 optimum:
// 2 kappa_r L^3 / T3^3 = (sigma^2 / g) K(d^r_{m1} / (B tau3)).
// 0 when the relay keeps no tasks, +inf when it uploads no data.
double t3_from_tau3(double tau3, Case2Indices indices, const Scenario& s);

// Sum of device BS work over f_bs_max.
double tau_s_minimal(Case2Indices indices, const Scenario& s);

double case2_objective(Case2Indices indices, const Case2LowerSolution& lower,
                       const Scenario& s);
Case2EnergyBreakdown case2_energy(Case2Indices indices,
                                  const Case2LowerSolution& lower,
                                  const Scenario& s);

// S1 closed forms at (psi, tau3) with tau_s minimal. nullopt when the
// point violates a deadline.
std::optional<Case2LowerSolution> scheme1_evaluate(double psi, double tau3,
                                                   Case2Indices indices,
                                                   const Scenario& s);

SolveResult<Case2LowerSolution> solve_scheme1(Case2Indices indices,
                                              const Scenario& s,
                                              const Case2Options& options = {});

// Interior-point solve of any scheme's lower problem.
SolveResult<Case2LowerSolution> solve_scheme_numeric(
    SchemeId scheme, Case2Indices indices, const Scenario& s,
    const Case2Options& options = {});

// solve_scheme1 for S1, solve_scheme_numeric otherwise.
SolveResult<Case2LowerSolution> solve_scheme(SchemeId scheme,
                                             Case2Indices indices,
                                             const Scenario& s,
                                             const Case2Options& options = {});

SolveResult<Case2Solution> solve_case2(const Scenario& s,
                                       const Case2Options& options = {});

// Same traversal evaluated serially.
SolveResult<Case2Solution> solve_case2_serial(const Scenario& s,
                                              const Case2Options& options = {});

// Names of the scheme constraints violated by more than `tol` seconds.
std::vector<std::string> check_scheme_constraints(
    SchemeId scheme, Case2Indices indices, const Case2LowerSolution& lower,
    const Scenario& s, double tol = 1e-9);

// Stationarity, dual feasibility and complementary slackness of an S1
// solution, as relative residuals.
struct Scheme1KktReport {
  double max_rel_residual = 0.0;
  bool ordering_active = false;  // T1 pinned by the ordering constraint
  bool relay_deadline_active = false;
};
Scheme1KktReport scheme1_kkt_residuals(Case2Indices indices,
                                       const Case2LowerSolution& lower,
                                       const Scenario& s);

// CPU caps implied by the block durations that the solution exceeds.
std::vector<std::string> cap_violations(Case2Indices indices,
                                        const Case2LowerSolution& lower,
                                        const Scenario& s);

}  // namespace relaymec
