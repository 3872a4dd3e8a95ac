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

#include "relaymec/case2_solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "relaymec/case1_solver.hpp"

namespace relaymec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Case2Deadlines {
  double t0 = 0.0;
  double device = 0.0;
  double relay = 0.0;
};

Case2Deadlines deadlines_of(const Scenario& s) {
  if (!s.relay_busy()) {
    throw std::invalid_argument("busy-relay solve needs relay_tasks");
  }
  const Deadlines& d = s.deadlines;
  if (!d.t0 || !d.t_s_th || !d.t_r_th) {
    throw std::invalid_argument(
        "busy-relay solve needs deadlines.t0, t_s_th and t_r_th");
  }
  return {*d.t0, *d.t_s_th, *d.t_r_th};
}

// Variables of the lower problems, in a fixed layout.
enum Var { kTau1, kTau2, kTau3, kT1, kT2, kT3, kTauS, kTc, kTau0, kNumVars };

struct LinearRow {
  std::array<double, kNumVars> a{};
  double rhs = 0.0;
  const char* name = "";
};

std::vector<LinearRow> scheme_rows(SchemeId scheme, const Case2Blocks& b,
                                   const Scenario& s) {
  const Case2Deadlines dl = deadlines_of(s);
  const double w_relay = b.l_bs_relay / s.compute.f_bs_max;
  std::vector<LinearRow> rows;
  auto add = [&rows](const char* name, double rhs,
                     std::initializer_list<std::pair<Var, double>> terms) {
    LinearRow row;
    row.name = name;
    row.rhs = rhs;
    for (const auto& [v, c] : terms) row.a[v] = c;
    rows.push_back(row);
  };
  switch (scheme) {
    case SchemeId::kS1:
      add("scheme ordering", -dl.t0, {{kT3, 1}, {kTau3, 1}, {kT1, -1}});
      add("relay deadline", dl.relay - dl.t0 - w_relay,
          {{kT3, 1}, {kTau3, 1}, {kTauS, 1}});
      break;
    case SchemeId::kS2:
      add("scheme ordering", dl.t0,
          {{kT1, 1}, {kTau1, 1}, {kT2, 1}, {kTau2, 1}, {kT3, -1}});
      add("device completion", 0.0,
          {{kT1, 1}, {kTau1, 1}, {kT2, 1}, {kTau2, 1}, {kTauS, 1}, {kTc, -1}});
      add("relay completion", -dl.t0,
          {{kT2, 1}, {kT3, 1}, {kTau3, 1}, {kTc, -1}});
      add("relay deadline", dl.relay - w_relay, {{kTc, 1}});
      break;
    case SchemeId::kS3:
      add("scheme ordering", dl.t0, {{kT1, 1}, {kTau1, 1}, {kT3, -1}});
      add("scheme ordering 2", -dl.t0,
          {{kT3, 1}, {kTau3, 1}, {kT1, -1}, {kTau1, -1}, {kT2, -1}});
      add("relay deadline", dl.relay - dl.t0 - w_relay,
          {{kT3, 1}, {kTau3, 1}, {kTauS, 1}, {kTau0, 1}});
      break;
  }
  add("device deadline", dl.device,
      {{kTauS, 1}, {kT1, 1}, {kTau1, 1}, {kT2, 1}, {kTau2, 1}});
  return rows;
}

std::array<double, kNumVars> as_vector(const Case2LowerSolution& x) {
  std::array<double, kNumVars> v{};
  v[kTau1] = x.tau1;
  v[kTau2] = x.tau2;
  v[kTau3] = x.tau3;
  v[kT1] = x.T1;
  v[kT2] = x.T2;
  v[kT3] = x.T3;
  v[kTauS] = x.tau_s;
  v[kTc] = x.t_c;
  v[kTau0] = x.tau0;
  return v;
}

double row_excess(const LinearRow& row, const std::array<double, kNumVars>& v) {
  double lhs = 0.0;
  for (int k = 0; k < kNumVars; ++k) lhs += row.a[k] * v[k];
  return lhs - row.rhs;
}

double cpu_energy(double kappa, double cycles, double duration) {
  if (cycles == 0.0) return 0.0;
  if (!(duration > 0.0)) return kInf;
  return kappa * cycles * cycles * cycles / (duration * duration);
}

double tx_energy(double d, double tau, double gain, const ChannelParams& ch) {
  if (d == 0.0) return 0.0;
  if (!(tau > 0.0) || d / (ch.bandwidth * tau) > 700.0) return kInf;
  return transmission_energy(d, tau, gain, ch);
}

Case2EnergyBreakdown energy_of(const Case2Blocks& b,
                               const Case2LowerSolution& x,
                               const Scenario& s) {
  const ChannelParams& ch = s.channel;
  const ComputeParams& c = s.compute;
  Case2EnergyBreakdown e;
  e.tx_md = tx_energy(b.d1, x.tau1, ch.gain_md_relay, ch);
  e.tx_relay_device = tx_energy(b.d2, x.tau2, ch.gain_relay_bs, ch);
  e.tx_relay_own = tx_energy(b.d3, x.tau3, ch.gain_relay_bs, ch);
  e.cpu_md = cpu_energy(c.kappa_md, b.l_local, x.T1);
  e.cpu_relay_device = cpu_energy(c.kappa_relay, b.l_relay, x.T2);
  e.cpu_relay_own = cpu_energy(c.kappa_relay, b.l_own, x.T3);
  return e;
}

double own_slope(const Case2Blocks& b, double tau3, const Scenario& s) {
  const ChannelParams& ch = s.channel;
  return ch.noise / ch.gain_relay_bs *
         transmission_slope_kernel(b.d3 / (ch.bandwidth * tau3));
}

double t3_of(const Case2Blocks& b, double tau3, const Scenario& s) {
  if (b.l_own == 0.0) return 0.0;
  if (b.d3 == 0.0) return kInf;
  const double rhs = own_slope(b, tau3, s);
  return b.l_own * std::cbrt(2.0 * s.compute.kappa_relay / rhs);
}

// S1 closed forms for fixed (psi, tau3); tau_s minimal, T1 lifted to the
// ordering bound when needed.
Case2LowerSolution s1_point(double psi, double tau3, const Case2Blocks& b,
                            const Scenario& s) {
  const ChannelParams& ch = s.channel;
  const ComputeParams& c = s.compute;
  const Case2Deadlines dl = deadlines_of(s);
  Case2LowerSolution x;
  x.psi = psi;
  x.tau3 = b.d3 > 0.0 ? tau3 : 0.0;
  x.T3 = t3_of(b, x.tau3, s);
  x.tau1 = tau_from_lambda(psi, b.d1, ch.gain_md_relay, ch);
  x.tau2 = tau_from_lambda(psi, b.d2, ch.gain_relay_bs, ch);
  x.T2 = b.l_relay > 0.0 ? b.l_relay * std::cbrt(2.0 * c.kappa_relay / psi)
                         : 0.0;
  const double t1_free =
      b.l_local > 0.0 ? b.l_local * std::cbrt(2.0 * c.kappa_md / psi) : 0.0;
  x.T1 = std::max(t1_free, dl.t0 + x.T3 + x.tau3);
  x.tau_s = b.l_bs_device / c.f_bs_max;
  return x;
}

double device_completion(const Case2LowerSolution& x) {
  return x.tau_s + x.T1 + x.tau1 + x.T2 + x.tau2;
}

void fill_scheme1_duals(const Case2Blocks& b, Case2LowerSolution& x,
                        const Scenario& s) {
  const Case2Deadlines dl = deadlines_of(s);
  const double f_bs = s.compute.f_bs_max;
  const double ordering = dl.t0 + x.T3 + x.tau3;
  const double scale = std::max(1.0, dl.relay);
  x.lambda = 0.0;
  if (x.T1 <= ordering + 1e-12 * scale) {
    const double marginal =
        b.l_local > 0.0 ? 2.0 * s.compute.kappa_md *
                              std::pow(b.l_local / x.T1, 3)
                        : 0.0;
    x.lambda = std::max(0.0, x.psi - marginal);
  }
  double own = 0.0;
  if (b.l_own > 0.0 && x.T3 > 0.0) {
    own = 2.0 * s.compute.kappa_relay * std::pow(b.l_own / x.T3, 3);
  } else if (b.d3 > 0.0) {
    own = own_slope(b, x.tau3, s);
  } else {
    own = x.lambda;
  }
  const bool pinned = x.T1 <= ordering + 1e-12 * scale;
  if (pinned && b.d1 == 0.0 && b.d2 == 0.0 && b.l_relay == 0.0) {
    // Device completion no longer depends on psi, so the search leaves it
    // arbitrary; stationarity in T1 and tau3 fixes both multipliers.
    const double marginal =
        b.l_local > 0.0 ? 2.0 * s.compute.kappa_md *
                              std::pow(b.l_local / x.T1, 3)
                        : 0.0;
    x.lambda = own;
    x.psi = marginal + own;
  }
  x.eta2 = std::max(0.0, own - x.lambda) / f_bs;
  x.eta1 = x.eta2 + x.psi / f_bs;
}

double golden_section(const std::function<double(double)>& f, double a,
                      double b, double rel_tol, double& best_x) {
  constexpr double kInvPhi = 0.6180339887498949;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 200 && (b - a) > rel_tol * std::fabs(b); ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  if (fc <= fd) {
    best_x = c;
    return fc;
  }
  best_x = d;
  return fd;
}

SolveResult<Case2LowerSolution> infeasible_scheme(SchemeId scheme,
                                                  Case2Indices idx,
                                                  const std::string& why) {
  std::ostringstream msg;
  msg << "infeasible scheme " << scheme_name(scheme) << " at (n1=" << idx.n1
      << ", n2=" << idx.n2 << ", m1=" << idx.m1 << "): " << why;
  return SolveResult<Case2LowerSolution>::infeasible(msg.str());
}

}  // namespace

const char* scheme_name(SchemeId scheme) {
  switch (scheme) {
    case SchemeId::kS1:
      return "S1";
    case SchemeId::kS2:
      return "S2";
    case SchemeId::kS3:
      return "S3";
  }
  return "?";
}

void check_indices(Case2Indices idx, const Scenario& s) {
  if (!s.relay_busy()) {
    throw std::invalid_argument("busy-relay indices need relay_tasks");
  }
  const int n = s.device_chain.size();
  const int m = s.relay_chain->size();
  if (!(1 <= idx.n1 && idx.n1 <= idx.n2 && idx.n2 <= n + 1 && 1 <= idx.m1 &&
        idx.m1 <= m + 1)) {
    std::ostringstream msg;
    msg << "invalid indices (n1=" << idx.n1 << ", n2=" << idx.n2
        << ", m1=" << idx.m1 << ") for N=" << n << ", M=" << m;
    throw std::invalid_argument(msg.str());
  }
}

Case2Blocks case2_blocks(Case2Indices idx, const Scenario& s) {
  check_indices(idx, s);
  const TaskChain& dev = s.device_chain;
  const TaskChain& rel = *s.relay_chain;
  Case2Blocks b;
  b.d1 = dev.data(idx.n1);
  b.d2 = dev.data(idx.n2);
  b.d3 = rel.data(idx.m1);
  b.l_local = dev.cycles_in(1, idx.n1);
  b.l_relay = dev.cycles_in(idx.n1, idx.n2);
  b.l_own = rel.cycles_in(1, idx.m1);
  b.l_bs_device = dev.cycles_in(idx.n2, dev.size() + 1);
  b.l_bs_relay = rel.cycles_in(idx.m1, rel.size() + 1);
  return b;
}

double t3_from_tau3(double tau3, Case2Indices idx, const Scenario& s) {
  const Case2Blocks b = case2_blocks(idx, s);
  if (b.l_own > 0.0 && b.d3 > 0.0 && !(tau3 > 0.0)) {
    throw ModelDomainError("t3_from_tau3: tau3 must be positive");
  }
  return t3_of(b, tau3, s);
}

double tau_s_minimal(Case2Indices idx, const Scenario& s) {
  return case2_blocks(idx, s).l_bs_device / s.compute.f_bs_max;
}

Case2EnergyBreakdown case2_energy(Case2Indices idx,
                                  const Case2LowerSolution& lower,
                                  const Scenario& s) {
  return energy_of(case2_blocks(idx, s), lower, s);
}

double case2_objective(Case2Indices idx, const Case2LowerSolution& lower,
                       const Scenario& s) {
  return case2_energy(idx, lower, s).total();
}

std::optional<Case2LowerSolution> scheme1_evaluate(double psi, double tau3,
                                                   Case2Indices idx,
                                                   const Scenario& s) {
  const Case2Blocks b = case2_blocks(idx, s);
  if (!(psi > 0.0)) throw ModelDomainError("scheme1_evaluate: psi must be positive");
  if (b.d3 > 0.0 && !(tau3 > 0.0)) {
    throw ModelDomainError("scheme1_evaluate: tau3 must be positive");
  }
  Case2LowerSolution x = s1_point(psi, tau3, b, s);
  if (!check_scheme_constraints(SchemeId::kS1, idx, x, s).empty()) {
    return std::nullopt;
  }
  x.energy = energy_of(b, x, s).total();
  if (!std::isfinite(x.energy)) return std::nullopt;
  fill_scheme1_duals(b, x, s);
  x.path = "closed-form";
  return x;
}

SolveResult<Case2LowerSolution> solve_scheme1(Case2Indices idx,
                                              const Scenario& s,
                                              const Case2Options& options) {
  const Case2Blocks b = case2_blocks(idx, s);
  const Case2Deadlines dl = deadlines_of(s);
  if (b.d3 == 0.0 && b.l_own > 0.0) {
    // The relay keeps its whole chain: T3 is limited only by deadlines.
    return solve_scheme_numeric(SchemeId::kS1, idx, s, options);
  }
  const ComputeParams& c = s.compute;
  const ChannelParams& ch = s.channel;
  const double tau_s = b.l_bs_device / c.f_bs_max;
  const double r_max = std::min(dl.relay - tau_s - b.l_bs_relay / c.f_bs_max,
                                dl.device - tau_s);
  if (!(dl.t0 <= r_max)) {
    return infeasible_scheme(SchemeId::kS1, idx,
                             "relay upload cannot precede the device deadline");
  }
  const double seed =
      2.0 * std::max({c.kappa_md * std::pow(c.f_md_max, 3),
                      c.kappa_relay * std::pow(c.f_relay_max, 3),
                      ch.noise / std::min(ch.gain_md_relay, ch.gain_relay_bs)});

  // Smallest feasible psi for a given tau3, or nullopt.
  auto best_at = [&](double tau3) -> std::optional<Case2LowerSolution> {
    const double t3 = t3_of(b, tau3, s);
    if (dl.t0 + t3 + tau3 > r_max) return std::nullopt;
    const DualSearchResult root = search_dual(
        [&](double psi) { return device_completion(s1_point(psi, tau3, b, s)); },
        dl.device, seed, options.bisection);
    if (!root.feasible) return std::nullopt;
    Case2LowerSolution x = s1_point(root.dual, tau3, b, s);
    x.energy = energy_of(b, x, s).total();
    if (!std::isfinite(x.energy)) return std::nullopt;
    return x;
  };
  auto energy_at = [&](double tau3) {
    const auto x = best_at(tau3);
    return x ? x->energy : kInf;
  };

  double best_tau3 = 0.0;
  double best_energy = kInf;
  if (b.d3 == 0.0) {
    best_energy = energy_at(0.0);
  } else {
    double tau3_hi = r_max - dl.t0;
    if (b.l_own > 0.0) {
      double lo = 0.0;
      double hi = tau3_hi;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (dl.t0 + t3_of(b, mid, s) + mid <= r_max) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      tau3_hi = lo;
    }
    if (!(tau3_hi > 0.0)) {
      return infeasible_scheme(SchemeId::kS1, idx,
                               "no room for the relay upload");
    }
    std::vector<double> grid;
    for (int k = 0; k < options.tau3_log_points; ++k) {
      const double e = -6.0 + 6.0 * k / std::max(1, options.tau3_log_points - 1);
      grid.push_back(tau3_hi * std::pow(10.0, e));
    }
    for (int k = 1; k <= options.tau3_linear_points; ++k) {
      grid.push_back(tau3_hi * k / options.tau3_linear_points);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    std::vector<double> values(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) values[i] = energy_at(grid[i]);

    std::vector<size_t> minima;
    for (size_t i = 0; i < grid.size(); ++i) {
      if (!std::isfinite(values[i])) continue;
      const bool left = i == 0 || values[i] <= values[i - 1];
      const bool right = i + 1 == grid.size() || values[i] <= values[i + 1];
      if (left && right) minima.push_back(i);
    }
    std::sort(minima.begin(), minima.end(),
              [&](size_t a, size_t c2) { return values[a] < values[c2]; });
    if (minima.size() > static_cast<size_t>(options.max_refinements)) {
      minima.resize(static_cast<size_t>(options.max_refinements));
    }
    double bracket_lo = 0.0;
    double bracket_hi = tau3_hi;
    for (size_t i : minima) {
      const double a = i == 0 ? 0.0 : grid[i - 1];
      const double c2 = i + 1 == grid.size() ? grid[i] : grid[i + 1];
      if (values[i] < best_energy) {
        best_energy = values[i];
        best_tau3 = grid[i];
        bracket_lo = a;
        bracket_hi = c2;
      }
      double x = grid[i];
      const double v = golden_section(energy_at, a, c2, options.golden_rel_tol, x);
      if (v < best_energy) {
        best_energy = v;
        best_tau3 = x;
        bracket_lo = a;
        bracket_hi = c2;
      }
    }

    // Away from the relay deadline the optimum is where the relay's
    // marginal value of time equals the ordering multiplier; that gap is
    // decreasing in tau3, so bisect it.
    auto gap = [&](double tau3) {
      const auto x = best_at(tau3);
      if (!x) return std::numeric_limits<double>::quiet_NaN();
      const double marginal_t1 =
          b.l_local > 0.0 ? 2.0 * c.kappa_md * std::pow(b.l_local / x->T1, 3) : 0.0;
      const double lambda =
          x->T1 <= (dl.t0 + x->T3 + x->tau3) * (1.0 + 1e-15) ? x->psi - marginal_t1 : 0.0;
      const double own = b.l_own > 0.0
                             ? 2.0 * c.kappa_relay * std::pow(b.l_own / x->T3, 3)
                             : own_slope(b, tau3, s);
      return own - lambda;
    };
    if (std::isfinite(best_energy) && best_tau3 < tau3_hi * (1.0 - 1e-9)) {
      double lo = std::max(bracket_lo, best_tau3 * 1e-3);
      double hi = std::min(bracket_hi, tau3_hi);
      if (gap(lo) > 0.0 && gap(hi) < 0.0) {
        for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double g = gap(mid);
          if (std::isnan(g)) break;
          (g > 0.0 ? lo : hi) = mid;
        }
        const double polished = 0.5 * (lo + hi);
        const double v = energy_at(polished);
        // Energies along tau3 carry the dual search's bisection noise.
        if (v <= best_energy * (1.0 + 1e-8)) {
          best_energy = v;
          best_tau3 = polished;
        }
      }
    }
  }
  if (!std::isfinite(best_energy)) {
    return infeasible_scheme(SchemeId::kS1, idx, "deadlines cannot be met");
  }
  Case2LowerSolution x = *best_at(best_tau3);
  fill_scheme1_duals(b, x, s);
  x.path = "closed-form";
  return SolveResult<Case2LowerSolution>::feasible(x);
}

SolveResult<Case2LowerSolution> solve_scheme_numeric(
    SchemeId scheme, Case2Indices idx, const Scenario& s,
    const Case2Options& options) {
  const Case2Blocks b = case2_blocks(idx, s);
  const Case2Deadlines dl = deadlines_of(s);
  const ChannelParams& ch = s.channel;
  const ComputeParams& c = s.compute;
  const std::vector<LinearRow> rows = scheme_rows(scheme, b, s);

  std::array<bool, kNumVars> present{};
  present[kTau1] = b.d1 > 0.0;
  present[kTau2] = b.d2 > 0.0;
  present[kTau3] = b.d3 > 0.0;
  present[kT1] = present[kT2] = present[kT3] = present[kTauS] = true;
  present[kTc] = scheme == SchemeId::kS2;
  present[kTau0] = scheme == SchemeId::kS3 && options.scheme3_free_gap;

  std::array<int, kNumVars> slot{};
  convex::Program program;
  program.time_scale = std::max(dl.relay, dl.device);
  auto add_var = [&](Var v, convex::Term term, double lower) {
    slot[v] = static_cast<int>(program.objective.size());
    program.objective.push_back(term);
    program.lower.push_back(lower);
  };
  auto tx_term = [&](double d, double gain) {
    return convex::Term{convex::Term::Kind::kTransmission, ch.noise / gain,
                        d / ch.bandwidth};
  };
  auto cpu_term = [](double kappa, double cycles) {
    if (cycles == 0.0) return convex::Term{};
    return convex::Term{convex::Term::Kind::kCompute,
                        kappa * cycles * cycles * cycles, 0.0};
  };
  for (int v = 0; v < kNumVars; ++v) slot[v] = -1;
  if (present[kTau1]) add_var(kTau1, tx_term(b.d1, ch.gain_md_relay), 0.0);
  if (present[kTau2]) add_var(kTau2, tx_term(b.d2, ch.gain_relay_bs), 0.0);
  if (present[kTau3]) add_var(kTau3, tx_term(b.d3, ch.gain_relay_bs), 0.0);
  add_var(kT1, cpu_term(c.kappa_md, b.l_local), 0.0);
  add_var(kT2, cpu_term(c.kappa_relay, b.l_relay), 0.0);
  add_var(kT3, cpu_term(c.kappa_relay, b.l_own), 0.0);
  const double tau_s_min = b.l_bs_device / c.f_bs_max;
  add_var(kTauS, convex::Term{}, tau_s_min);
  if (present[kTc]) add_var(kTc, convex::Term{}, -program.time_scale);
  if (present[kTau0]) add_var(kTau0, convex::Term{}, 0.0);

  std::vector<int> row_of(rows.size(), -1);
  for (size_t j = 0; j < rows.size(); ++j) {
    convex::Row row;
    row.rhs = rows[j].rhs;
    row.name = rows[j].name;
    for (int v = 0; v < kNumVars; ++v) {
      if (rows[j].a[v] != 0.0 && present[v]) {
        row.coeffs.emplace_back(slot[v], rows[j].a[v]);
      }
    }
    if (row.coeffs.empty()) {
      if (row.rhs < -1e-12 * program.time_scale) {
        return infeasible_scheme(scheme, idx, std::string(rows[j].name));
      }
      continue;
    }
    row_of[j] = static_cast<int>(program.rows.size());
    program.rows.push_back(std::move(row));
  }

  const convex::Result r = convex::minimize(program, options.barrier);
  if (!r.feasible) return infeasible_scheme(scheme, idx, r.reason);

  auto value = [&](Var v) { return present[v] ? r.x[static_cast<size_t>(slot[v])] : 0.0; };
  Case2LowerSolution x;
  x.tau1 = value(kTau1);
  x.tau2 = value(kTau2);
  x.tau3 = value(kTau3);
  x.T1 = value(kT1);
  x.T2 = value(kT2);
  x.T3 = value(kT3);
  x.tau_s = tau_s_min;
  x.tau0 = value(kTau0);
  if (scheme == SchemeId::kS2) {
    x.t_c = std::max(x.T1 + x.tau1 + x.T2 + x.tau2 + x.tau_s,
                     dl.t0 + x.T2 + x.T3 + x.tau3);
  }
  auto dual = [&](const char* name) {
    for (size_t j = 0; j < rows.size(); ++j) {
      if (std::string(rows[j].name) == name && row_of[j] >= 0) {
        return r.row_duals[static_cast<size_t>(row_of[j])];
      }
    }
    return 0.0;
  };
  x.psi = dual("device deadline");
  x.lambda = dual("scheme ordering");
  x.lambda2 = dual("scheme ordering 2");
  x.eta2 = dual("relay deadline") / c.f_bs_max;
  x.eta1 = r.bound_duals[static_cast<size_t>(slot[kTauS])] / c.f_bs_max;
  x.energy = energy_of(b, x, s).total();
  x.path = "barrier";
  if (!check_scheme_constraints(scheme, idx, x, s).empty()) {
    return infeasible_scheme(scheme, idx, "solver returned an infeasible point");
  }
  return SolveResult<Case2LowerSolution>::feasible(x);
}

SolveResult<Case2LowerSolution> solve_scheme(SchemeId scheme,
                                             Case2Indices idx,
                                             const Scenario& s,
                                             const Case2Options& options) {
  if (scheme == SchemeId::kS1) return solve_scheme1(idx, s, options);
  return solve_scheme_numeric(scheme, idx, s, options);
}

namespace {

struct Candidate {
  SchemeId scheme;
  Case2Indices idx;
};

std::vector<Candidate> candidates(const Scenario& s) {
  std::vector<Candidate> out;
  const int n = s.device_chain.size();
  const int m = s.relay_chain->size();
  for (SchemeId scheme : {SchemeId::kS1, SchemeId::kS2, SchemeId::kS3}) {
    for (int n1 = 1; n1 <= n + 1; ++n1) {
      for (int n2 = n1; n2 <= n + 1; ++n2) {
        for (int m1 = 1; m1 <= m + 1; ++m1) {
          out.push_back({scheme, {n1, n2, m1}});
        }
      }
    }
  }
  return out;
}

SolveResult<Case2Solution> traverse(const Scenario& s,
                                    const Case2Options& options,
                                    ExecutionMode mode) {
  deadlines_of(s);
  const std::vector<Candidate> all = candidates(s);
  std::vector<std::optional<Case2LowerSolution>> lowers(all.size());
  parallel_for(all.size(), mode, [&](size_t i) {
    auto r = solve_scheme(all[i].scheme, all[i].idx, s, options);
    if (r) lowers[i] = r.value();
  });
  std::optional<Case2Solution> best;
  for (size_t i = 0; i < all.size(); ++i) {
    if (!lowers[i]) continue;
    const double e = lowers[i]->energy;
    if (best && !(e < best->lower.energy -
                          options.tie_rel_tol * std::fabs(best->lower.energy))) {
      continue;
    }
    Case2Solution sol;
    sol.scheme = all[i].scheme;
    sol.indices = all[i].idx;
    sol.lower = *lowers[i];
    best = sol;
  }
  if (!best) {
    return SolveResult<Case2Solution>::infeasible(
        "globally infeasible: no scheme and split meets the deadlines");
  }
  best->energy_breakdown = case2_energy(best->indices, best->lower, s);
  best->cap_violations = cap_violations(best->indices, best->lower, s);
  return SolveResult<Case2Solution>::feasible(*best);
}

}  // namespace

SolveResult<Case2Solution> solve_case2(const Scenario& s,
                                       const Case2Options& options) {
  return traverse(s, options, options.mode);
}

SolveResult<Case2Solution> solve_case2_serial(const Scenario& s,
                                              const Case2Options& options) {
  return traverse(s, options, ExecutionMode::kSerial);
}

std::vector<std::string> check_scheme_constraints(
    SchemeId scheme, Case2Indices idx, const Case2LowerSolution& lower,
    const Scenario& s, double tol) {
  const Case2Blocks b = case2_blocks(idx, s);
  std::vector<std::string> out;
  const auto v = as_vector(lower);
  for (const LinearRow& row : scheme_rows(scheme, b, s)) {
    if (row_excess(row, v) > tol) out.emplace_back(row.name);
  }
  if (lower.tau_s < b.l_bs_device / s.compute.f_bs_max - tol) {
    out.emplace_back("BS device work");
  }
  const std::array<std::pair<double, const char*>, 8> nonneg{{
      {lower.tau1, "tau1 >= 0"},
      {lower.tau2, "tau2 >= 0"},
      {lower.tau3, "tau3 >= 0"},
      {lower.T1, "T1 >= 0"},
      {lower.T2, "T2 >= 0"},
      {lower.T3, "T3 >= 0"},
      {lower.tau0, "tau0 >= 0"},
      {lower.tau_s, "tau_s >= 0"},
  }};
  for (const auto& [value, name] : nonneg) {
    if (value < -tol) out.emplace_back(name);
  }
  return out;
}

Scheme1KktReport scheme1_kkt_residuals(Case2Indices idx,
                                       const Case2LowerSolution& x,
                                       const Scenario& s) {
  const Case2Blocks b = case2_blocks(idx, s);
  const Case2Deadlines dl = deadlines_of(s);
  const ChannelParams& ch = s.channel;
  const ComputeParams& c = s.compute;
  const double f_bs = c.f_bs_max;
  Scheme1KktReport report;
  const double psi = x.psi;
  if (!(psi > 0.0)) return report;
  auto worst = [&report](double r) {
    report.max_rel_residual = std::max(report.max_rel_residual, r);
  };
  auto tx_slope = [&](double d, double tau, double gain) {
    return ch.noise / gain * transmission_slope_kernel(d / (ch.bandwidth * tau));
  };
  auto marginal = [](double kappa, double cycles, double duration) {
    return cycles > 0.0 ? 2.0 * kappa * std::pow(cycles / duration, 3) : 0.0;
  };
  const double mu = x.lambda + x.eta2 * f_bs;
  const double dual_scale = std::max(psi, mu);

  // Stationarity in each variable.
  if (b.d1 > 0.0) worst(std::fabs(tx_slope(b.d1, x.tau1, ch.gain_md_relay) - psi) / psi);
  if (b.d2 > 0.0) worst(std::fabs(tx_slope(b.d2, x.tau2, ch.gain_relay_bs) - psi) / psi);
  if (b.l_relay > 0.0) {
    worst(std::fabs(marginal(c.kappa_relay, b.l_relay, x.T2) - psi) / psi);
  }
  worst(std::fabs(marginal(c.kappa_md, b.l_local, x.T1) + x.lambda - psi) / psi);
  if (b.l_own > 0.0) {
    worst(std::fabs(marginal(c.kappa_relay, b.l_own, x.T3) - mu) / dual_scale);
  }
  if (b.d3 > 0.0) {
    worst(std::fabs(tx_slope(b.d3, x.tau3, ch.gain_relay_bs) - mu) / dual_scale);
  }
  worst(std::fabs((x.eta1 - x.eta2) * f_bs - psi) / psi);

  // Dual feasibility.
  worst(std::max(0.0, -x.lambda) / dual_scale);
  worst(std::max(0.0, -x.eta1 * f_bs) / dual_scale);
  worst(std::max(0.0, -x.eta2 * f_bs) / dual_scale);

  // Complementary slackness, as multiplier x slack in relative units.
  const double scale = std::max(dl.device, dl.relay);
  const double ordering_slack = x.T1 - (dl.t0 + x.T3 + x.tau3);
  const double relay_slack =
      dl.relay - (dl.t0 + x.T3 + x.tau3 + x.tau_s + b.l_bs_relay / f_bs);
  const double device_slack = dl.device - device_completion(x);
  const double bs_slack = x.tau_s - b.l_bs_device / f_bs;
  report.ordering_active = ordering_slack <= 1e-9 * scale;
  report.relay_deadline_active = relay_slack <= 1e-9 * scale;
  worst(x.lambda / dual_scale * ordering_slack / scale);
  worst(x.eta2 * f_bs / dual_scale * relay_slack / scale);
  worst(x.eta1 * f_bs / dual_scale * bs_slack / scale);
  worst(device_slack / scale);
  return report;
}

std::vector<std::string> cap_violations(Case2Indices idx,
                                        const Case2LowerSolution& x,
                                        const Scenario& s) {
  const Case2Blocks b = case2_blocks(idx, s);
  const ComputeParams& c = s.compute;
  std::vector<std::string> out;
  auto check = [&out](double cycles, double duration, double cap,
                      const char* what) {
    if (cycles == 0.0) return;
    const double f = duration > 0.0 ? cycles / duration : kInf;
    if (f > cap * (1.0 + 1e-9)) {
      std::ostringstream msg;
      msg << what << " frequency " << f << " Hz exceeds cap " << cap << " Hz";
      out.push_back(msg.str());
    }
  };
  check(b.l_local, x.T1, c.f_md_max, "device");
  check(b.l_relay, x.T2, c.f_relay_max, "relay (device tasks)");
  check(b.l_own, x.T3, c.f_relay_max, "relay (own tasks)");
  return out;
}

}  // namespace relaymec
