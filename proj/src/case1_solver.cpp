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

#include "relaymec/case1_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "relaymec/lambertw.hpp"

namespace relaymec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Per-split constants of the lower-level problem.
struct SplitBlocks {
  double d1 = 0.0;  // data sent device -> relay
  double d2 = 0.0;  // data sent relay -> BS
  double local_cycles = 0.0;
  double relay_cycles = 0.0;
  double bs_cycles = 0.0;
};

SplitBlocks blocks_of(SplitIndices split, const TaskChain& chain) {
  const int exit = chain.size() + 1;
  return {chain.data(split.n1), chain.data(split.n2),
          chain.cycles_in(1, split.n1), chain.cycles_in(split.n1, split.n2),
          chain.cycles_in(split.n2, exit)};
}

double site_time(double cycles, double f) {
  if (cycles == 0.0) return 0.0;
  return f > 0.0 ? cycles / f : kInf;
}

double lhs_at(double lambda, const SplitBlocks& b, const Scenario& s) {
  const ComputeParams& c = s.compute;
  const ChannelParams& ch = s.channel;
  return site_time(b.local_cycles,
                   freq_from_lambda(lambda, c.kappa_md, c.f_md_max)) +
         site_time(b.relay_cycles,
                   freq_from_lambda(lambda, c.kappa_relay, c.f_relay_max)) +
         b.bs_cycles / c.f_bs_max +
         tau_from_lambda(lambda, b.d1, ch.gain_md_relay, ch) +
         tau_from_lambda(lambda, b.d2, ch.gain_relay_bs, ch);
}

double deadline_of(const Scenario& s) {
  if (!s.deadlines.t_s) {
    throw std::invalid_argument("idle-relay solve needs deadlines.t_s");
  }
  return *s.deadlines.t_s;
}

// Lexicographic scan keeping the first split among near-equal optima.
SolveResult<Case1Solution> reduce(
    const std::vector<SplitIndices>& splits,
    const std::vector<std::optional<Case1LowerSolution>>& lowers,
    const Scenario& s, double tie_rel_tol) {
  std::optional<Case1Solution> best;
  for (size_t i = 0; i < splits.size(); ++i) {
    if (!lowers[i]) continue;
    const double e = lowers[i]->energy;
    if (best && !(e < best->lower.energy -
                          tie_rel_tol * std::fabs(best->lower.energy))) {
      continue;
    }
    best = Case1Solution{splits[i], *lowers[i],
                         case1_energy(splits[i], *lowers[i], s)};
  }
  if (!best) {
    return SolveResult<Case1Solution>::infeasible(
        "globally infeasible: no split meets the deadline");
  }
  return SolveResult<Case1Solution>::feasible(*best);
}

SolveResult<Case1Solution> enumerate(const Scenario& s,
                                     const std::vector<SplitIndices>& splits,
                                     const Case1Options& options,
                                     ExecutionMode mode) {
  std::vector<std::optional<Case1LowerSolution>> lowers(splits.size());
  parallel_for(splits.size(), mode, [&](size_t i) {
    auto r = solve_lower_case1(splits[i], s, options);
    if (r) lowers[i] = r.value();
  });
  return reduce(splits, lowers, s, options.tie_rel_tol);
}

}  // namespace

void check_split(SplitIndices split, const TaskChain& chain) {
  if (!(1 <= split.n1 && split.n1 <= split.n2 &&
        split.n2 <= chain.size() + 1)) {
    std::ostringstream msg;
    msg << "invalid split (n1=" << split.n1 << ", n2=" << split.n2
        << ") for N=" << chain.size();
    throw std::invalid_argument(msg.str());
  }
}

double tau_from_lambda(double lambda, double data_nats, double gain,
                       const ChannelParams& channel) {
  if (data_nats == 0.0) return 0.0;
  if (!(lambda > 0.0) || !(gain > 0.0)) {
    throw ModelDomainError("tau_from_lambda: lambda * gain must be positive");
  }
  const double a = lambda * gain / channel.noise;
  const double w = lambert_w0((a - 1.0) / std::numbers::e);
  const double rate = channel.bandwidth * (w + 1.0);
  return rate > 0.0 ? data_nats / rate : kInf;
}

double freq_from_lambda(double lambda, double kappa, double f_cap) {
  if (!(lambda > 0.0)) return 0.0;
  return std::min(std::cbrt(lambda / (2.0 * kappa)), f_cap);
}

double deadline_lhs(double lambda, SplitIndices split, const Scenario& s) {
  check_split(split, s.device_chain);
  return lhs_at(lambda, blocks_of(split, s.device_chain), s);
}

Case1EnergyBreakdown case1_energy(SplitIndices split,
                                  const Case1LowerSolution& lower,
                                  const Scenario& s) {
  const SplitBlocks b = blocks_of(split, s.device_chain);
  const ChannelParams& ch = s.channel;
  Case1EnergyBreakdown e;
  e.tx_md = transmission_energy(b.d1, lower.tau1, ch.gain_md_relay, ch);
  e.tx_relay = transmission_energy(b.d2, lower.tau2, ch.gain_relay_bs, ch);
  e.cpu_md = compute_energy(b.local_cycles, lower.f_local, s.compute.kappa_md);
  e.cpu_relay =
      compute_energy(b.relay_cycles, lower.f_relay, s.compute.kappa_relay);
  return e;
}

SolveResult<Case1LowerSolution> solve_lower_case1(SplitIndices split,
                                                  const Scenario& s,
                                                  const Case1Options& options) {
  check_split(split, s.device_chain);
  const double deadline = deadline_of(s);
  const SplitBlocks b = blocks_of(split, s.device_chain);
  const ComputeParams& c = s.compute;
  const ChannelParams& ch = s.channel;

  const bool transmits = b.d1 > 0.0 || b.d2 > 0.0;
  const bool priced = transmits || b.local_cycles > 0.0 || b.relay_cycles > 0.0;
  // Completion time with every frequency at its cap and instantaneous links.
  const double fastest = b.local_cycles / c.f_md_max +
                         b.relay_cycles / c.f_relay_max +
                         b.bs_cycles / c.f_bs_max;
  if (fastest > deadline || (transmits && fastest >= deadline)) {
    std::ostringstream msg;
    msg << "infeasible split (" << split.n1 << ", " << split.n2
        << "): completion time is at least " << fastest << " s > deadline "
        << deadline << " s";
    return SolveResult<Case1LowerSolution>::infeasible(msg.str());
  }

  Case1LowerSolution out;
  out.f_bs = c.f_bs_max;
  if (!priced) {
    out.slack = deadline - fastest;
    return SolveResult<Case1LowerSolution>::feasible(out);
  }

  const double seed =
      2.0 * std::max({c.kappa_md * std::pow(c.f_md_max, 3),
                      c.kappa_relay * std::pow(c.f_relay_max, 3),
                      ch.noise / std::min(ch.gain_md_relay, ch.gain_relay_bs)});
  const DualSearchResult root = search_dual(
      [&](double lambda) { return lhs_at(lambda, b, s); }, deadline, seed,
      options.bisection);
  if (!root.feasible) {
    return SolveResult<Case1LowerSolution>::infeasible(
        "infeasible split: no multiplier meets the deadline");
  }

  const double lambda = root.dual;
  out.lambda = lambda;
  out.tau1 = tau_from_lambda(lambda, b.d1, ch.gain_md_relay, ch);
  out.tau2 = tau_from_lambda(lambda, b.d2, ch.gain_relay_bs, ch);
  if (b.local_cycles > 0.0) {
    out.f_local = freq_from_lambda(lambda, c.kappa_md, c.f_md_max);
  }
  if (b.relay_cycles > 0.0) {
    out.f_relay = freq_from_lambda(lambda, c.kappa_relay, c.f_relay_max);
  }
  out.slack = deadline - root.lhs;
  out.energy = case1_energy(split, out, s).total();
  return SolveResult<Case1LowerSolution>::feasible(out);
}

bool case1_pruning_applicable(const ComputeParams& compute) {
  return compute.f_relay_max <= compute.f_bs_max;
}

std::vector<SplitIndices> case1_candidate_splits(const TaskChain& chain,
                                                 bool prune) {
  std::vector<SplitIndices> out;
  const int exit = chain.size() + 1;
  for (int n1 = 1; n1 <= exit; ++n1) {
    for (int n2 = n1; n2 <= exit; ++n2) {
      if (prune && n2 > n1) {
        const double d = chain.data(n2);
        if (d > 0.0 && d >= chain.data(n2 - 1)) continue;
      }
      out.push_back({n1, n2});
    }
  }
  return out;
}

SolveResult<Case1Solution> solve_case1(const Scenario& s,
                                       const Case1Options& options) {
  if (s.relay_busy()) {
    throw std::invalid_argument("solve_case1 requires a scenario without relay tasks");
  }
  const bool prune = case1_pruning_applicable(s.compute);
  return enumerate(s, case1_candidate_splits(s.device_chain, prune), options,
                   options.mode);
}

SolveResult<Case1Solution> solve_case1_exhaustive(const Scenario& s,
                                                  const Case1Options& options) {
  if (s.relay_busy()) {
    throw std::invalid_argument("solve_case1 requires a scenario without relay tasks");
  }
  return enumerate(s, case1_candidate_splits(s.device_chain, false), options,
                   ExecutionMode::kSerial);
}

Case1KktReport case1_kkt_residuals(SplitIndices split,
                                   const Case1LowerSolution& lower,
                                   const Scenario& s) {
  const SplitBlocks b = blocks_of(split, s.device_chain);
  const ChannelParams& ch = s.channel;
  const ComputeParams& c = s.compute;
  const double lambda = lower.lambda;
  Case1KktReport report;
  if (!(lambda > 0.0)) return report;

  auto worst = [&report](double r) {
    report.max_rel_residual = std::max(report.max_rel_residual, r);
  };
  // lambda + dE/dtau = 0, with dE/dtau = -(sigma^2 / gain) K(d / (B tau)).
  auto tau_residual = [&](double d, double tau, double gain) {
    if (d == 0.0) return;
    const double slope =
        ch.noise / gain * transmission_slope_kernel(d / (ch.bandwidth * tau));
    worst(std::fabs(lambda - slope) / lambda);
  };
  tau_residual(b.d1, lower.tau1, ch.gain_md_relay);
  tau_residual(b.d2, lower.tau2, ch.gain_relay_bs);

  // Per unit l / f^2: 2 kappa f^3 - lambda + nu = 0 with nu >= 0 only at
  // the cap.
  auto freq_residual = [&](double cycles, double f, double kappa,
                           double f_cap) {
    if (cycles == 0.0) return false;
    const double marginal = 2.0 * kappa * f * f * f;
    if (f < f_cap * (1.0 - 1e-12)) {
      worst(std::fabs(marginal - lambda) / lambda);
      return true;
    }
    worst(std::max(0.0, marginal - lambda) / lambda);
    return false;
  };
  report.interior_local =
      freq_residual(b.local_cycles, lower.f_local, c.kappa_md, c.f_md_max);
  report.interior_relay = freq_residual(b.relay_cycles, lower.f_relay,
                                        c.kappa_relay, c.f_relay_max);
  return report;
}

}  // namespace relaymec
