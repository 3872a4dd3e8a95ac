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

// Energy-optimal offloading when the relay has no tasks of its own.
//
// The device chain is split at (n1, n2): tasks 1..n1-1 run locally,
// n1..n2-1 at the relay and n2..N at the base station. For a fixed split
// the problem is convex; stationarity gives every transmit duration and CPU
// frequency as a closed form of a single multiplier on the deadline, and
// the deadline is met with equality by bisection on that multiplier. The
// outer search enumerates splits, skipping candidates that provably cannot
// improve on their left neighbour.

#pragma once

#include <vector>

#include "relaymec/dual_search.hpp"
#include "relaymec/model.hpp"
#include "relaymec/parallel.hpp"
#include "relaymec/result.hpp"

namespace relaymec {

struct SplitIndices {
  int n1 = 1;  // first task run at the relay
  int n2 = 1;  // first task run at the base station

  friend bool operator==(const SplitIndices&, const SplitIndices&) = default;
};

// Throws std::invalid_argument unless 1 <= n1 <= n2 <= N+1.
void check_split(SplitIndices split, const TaskChain& chain);

struct Case1LowerSolution {
  double tau1 = 0.0;     // device -> relay transmit time
  double tau2 = 0.0;     // relay -> BS transmit time
  double f_local = 0.0;  // one frequency for all local tasks (0 if none)
  double f_relay = 0.0;  // one frequency for all relay tasks (0 if none)
  double f_bs = 0.0;     // base-station frequency, always the cap
  double lambda = 0.0;   // deadline multiplier
  double energy = 0.0;
  double slack = 0.0;    // deadline minus completion time, >= 0
};

struct Case1EnergyBreakdown {
  double tx_md = 0.0;
  double tx_relay = 0.0;
  double cpu_md = 0.0;
  double cpu_relay = 0.0;

  double total() const { return tx_md + tx_relay + cpu_md + cpu_relay; }
};

struct Case1Solution {
  SplitIndices split;
  Case1LowerSolution lower;
  Case1EnergyBreakdown energy_breakdown;
};

struct Case1Options {
  DualSearchOptions bisection{};
  // Splits whose energies agree to this relative tolerance are ties; the
  // lexicographically smallest (n1, n2) wins.
  double tie_rel_tol = 1e-12;
  ExecutionMode mode = ExecutionMode::kParallel;
};

// d / (B (W0((lambda gain / sigma^2 - 1) / e) + 1)); zero for zero data.
double tau_from_lambda(double lambda, double data_nats, double gain,
                       const ChannelParams& channel);

// min{(lambda / (2 kappa))^(1/3), f_cap}.
double freq_from_lambda(double lambda, double kappa, double f_cap);

// Completion time of the chain under the closed-form response to `lambda`.
// Base-station tasks always run at f_bs_max.
double deadline_lhs(double lambda, SplitIndices split, const Scenario& s);

Case1EnergyBreakdown case1_energy(SplitIndices split,
                                  const Case1LowerSolution& lower,
                                  const Scenario& s);

SolveResult<Case1LowerSolution> solve_lower_case1(
    SplitIndices split, const Scenario& s, const Case1Options& options = {});

// True when the left-neighbour pruning rule is sound for these caps: it
// relies on a task moved from the base station to the relay never running
// faster there, i.e. f_relay_max <= f_bs_max.
bool case1_pruning_applicable(const ComputeParams& compute);

// Splits the outer search solves, in lexicographic order. With `prune`, a
// candidate (n1, n2) with n2 > n1 and d_{n2} >= d_{n2-1} is dropped:
// its energy can never be below that of (n1, n2-1). Exit and zero-data
// tasks are never dropped.
std::vector<SplitIndices> case1_candidate_splits(const TaskChain& chain,
                                                 bool prune);

// Global optimum over all splits. Pruned when sound, evaluated with
// `options.mode`.
SolveResult<Case1Solution> solve_case1(const Scenario& s,
                                       const Case1Options& options = {});

// Serial, unpruned traversal of every split. Reference for solve_case1.
SolveResult<Case1Solution> solve_case1_exhaustive(
    const Scenario& s, const Case1Options& options = {});

// Worst relative residual of the stationarity conditions at a returned
// lower solution: the two transmit-time conditions and one frequency
// condition per non-empty site. Capped sites are checked for a
// non-negative cap multiplier instead.
struct Case1KktReport {
  double max_rel_residual = 0.0;
  bool interior_local = false;
  bool interior_relay = false;
};
Case1KktReport case1_kkt_residuals(SplitIndices split,
                                   const Case1LowerSolution& lower,
                                   const Scenario& s);

}  // namespace relaymec
