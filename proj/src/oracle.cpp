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

#include "relaymec/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace relaymec::oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double link_energy(double d, double tau, double gain, const ChannelParams& ch) {
  if (d == 0.0) return 0.0;
  if (!(tau > 0.0)) return kInf;
  return ch.noise * tau / gain * std::expm1(d / (tau * ch.bandwidth));
}

double cpu_energy(double kappa, double cycles, double duration) {
  if (cycles == 0.0) return 0.0;
  if (!(duration > 0.0)) return kInf;
  return kappa * std::pow(cycles, 3) / (duration * duration);
}

double sum_cycles(const TaskChain& chain, int first, int last) {
  double total = 0.0;
  for (int i = first; i < last; ++i) total += chain.cycles(i);
  return total;
}

double dot(const Point& a, const Point& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

struct Best {
  double value = kInf;
  size_t index = std::numeric_limits<size_t>::max();

  bool better_than(const Best& o) const {
    return value < o.value || (value == o.value && index < o.index);
  }
};

}  // namespace

SolveResult<GridResult> grid_minimize(const Objective& f,
                                      const Predicate& feasible,
                                      const GridSpec& spec,
                                      ExecutionMode mode) {
  if (spec.rounds < 1) throw std::invalid_argument("grid: rounds must be >= 1");
  for (const Axis& a : spec.axes) {
    if (!(a.lo < a.hi) || a.points < 2) {
      throw std::invalid_argument("grid: each axis needs lo < hi and >= 2 points");
    }
  }
  const size_t dims = spec.axes.size();
  std::vector<double> lo(dims), hi(dims);
  for (size_t k = 0; k < dims; ++k) {
    lo[k] = spec.axes[k].lo;
    hi[k] = spec.axes[k].hi;
  }

  GridResult out;
  bool have = false;
  for (int round = 0; round < spec.rounds; ++round) {
    std::vector<int> pts(dims);
    size_t total = 1;
    for (size_t k = 0; k < dims; ++k) {
      pts[k] = (round > 0 && spec.refine_points >= 2) ? spec.refine_points
                                                      : spec.axes[k].points;
      total *= static_cast<size_t>(pts[k]);
    }
    auto decode = [&](size_t index) {
      Point p(dims);
      for (size_t k = 0; k < dims; ++k) {
        const size_t i = index % static_cast<size_t>(pts[k]);
        index /= static_cast<size_t>(pts[k]);
        p[k] = i + 1 == static_cast<size_t>(pts[k])
                   ? hi[k]
                   : lo[k] + (hi[k] - lo[k]) * static_cast<double>(i) /
                                 (pts[k] - 1);
      }
      return p;
    };
    const size_t chunks = std::min<size_t>(total, 1024);
    std::vector<Best> chunk_best(chunks);
    parallel_for(chunks, mode, [&](size_t c) {
      const size_t begin = total * c / chunks;
      const size_t end = total * (c + 1) / chunks;
      Best best;
      for (size_t i = begin; i < end; ++i) {
        const Point p = decode(i);
        if (!feasible(p)) continue;
        const double v = f(p);
        if (!std::isfinite(v)) continue;
        const Best cand{v, i};
        if (cand.better_than(best)) best = cand;
      }
      chunk_best[c] = best;
    });
    Best best;
    for (const Best& b : chunk_best) {
      if (b.better_than(best)) best = b;
    }
    if (best.index != std::numeric_limits<size_t>::max() &&
        (!have || best.value < out.value)) {
      out.point = decode(best.index);
      out.value = best.value;
      have = true;
    }
    if (!have) {
      return SolveResult<GridResult>::infeasible("no feasible point found");
    }
    out.round_values.push_back(out.value);

    // Shrink around the incumbent. An incumbent on an edge of the current
    // box that is not an original bound only recentres the box. The choice
    // is made for all axes at once so equal spacings stay equal.
    bool on_edge = false;
    for (size_t k = 0; k < dims; ++k) {
      const double c = out.point[k];
      const double tiny = 1e-12 * (hi[k] - lo[k]);
      on_edge |= (c <= lo[k] + tiny && lo[k] > spec.axes[k].lo) ||
                 (c >= hi[k] - tiny && hi[k] < spec.axes[k].hi);
    }
    for (size_t k = 0; k < dims; ++k) {
      const double c = out.point[k];
      const double width = hi[k] - lo[k];
      const double w = on_edge ? width : width / 5.0;
      double a = c - 0.5 * w;
      double b = c + 0.5 * w;
      if (a < spec.axes[k].lo) {
        b += spec.axes[k].lo - a;
        a = spec.axes[k].lo;
      }
      if (b > spec.axes[k].hi) {
        a -= b - spec.axes[k].hi;
        b = spec.axes[k].hi;
      }
      lo[k] = std::max(a, spec.axes[k].lo);
      hi[k] = std::min(b, spec.axes[k].hi);
    }
  }
  return SolveResult<GridResult>::feasible(out);
}

double residual(const Box& box, const std::vector<Halfspace>& halfspaces,
                const Point& x) {
  double worst = 0.0;
  for (size_t k = 0; k < x.size(); ++k) {
    worst = std::max({worst, box.lo[k] - x[k], x[k] - box.hi[k]});
  }
  for (const Halfspace& h : halfspaces) worst = std::max(worst, dot(h.a, x) - h.b);
  return worst;
}

std::optional<Point> project(const Box& box,
                             const std::vector<Halfspace>& halfspaces,
                             const Point& x0, double tol) {
  const size_t n = x0.size();
  const size_t sets = halfspaces.size() + 1;
  std::vector<Point> corr(sets, Point(n, 0.0));
  Point x = x0;
  for (int cycle = 0; cycle < 20000; ++cycle) {
    double moved = 0.0;
    for (size_t s = 0; s < sets; ++s) {
      Point y(n);
      for (size_t k = 0; k < n; ++k) y[k] = x[k] + corr[s][k];
      Point z = y;
      if (s == 0) {
        for (size_t k = 0; k < n; ++k) z[k] = std::clamp(y[k], box.lo[k], box.hi[k]);
      } else {
        const Halfspace& h = halfspaces[s - 1];
        const double excess = dot(h.a, y) - h.b;
        if (excess > 0.0) {
          const double norm2 = dot(h.a, h.a);
          for (size_t k = 0; k < n; ++k) z[k] = y[k] - excess / norm2 * h.a[k];
        }
      }
      for (size_t k = 0; k < n; ++k) {
        corr[s][k] = y[k] - z[k];
        moved = std::max(moved, std::fabs(z[k] - x[k]));
      }
      x = z;
    }
    if (moved <= 1e-16 && residual(box, halfspaces, x) <= tol) break;
  }
  // Dykstra converges in the limit; finish with plain cyclic projections so
  // that small residuals are removed outright.
  for (int cycle = 0; cycle < 200 && residual(box, halfspaces, x) > 0.0; ++cycle) {
    for (const Halfspace& h : halfspaces) {
      const double excess = dot(h.a, x) - h.b;
      if (excess > 0.0) {
        const double norm2 = dot(h.a, h.a);
        for (size_t k = 0; k < n; ++k) x[k] -= excess * (1.0 + 1e-12) / norm2 * h.a[k];
      }
    }
    for (size_t k = 0; k < n; ++k) x[k] = std::clamp(x[k], box.lo[k], box.hi[k]);
  }
  if (residual(box, halfspaces, x) > tol) return std::nullopt;
  return x;
}

Point central_gradient(const Objective& f, const Point& x) {
  Point g(x.size());
  Point y = x;
  for (size_t k = 0; k < x.size(); ++k) {
    const double h = std::max(1e-8, 1e-8 * std::fabs(x[k]));
    y[k] = x[k] + h;
    const double up = f(y);
    y[k] = x[k] - h;
    const double down = f(y);
    y[k] = x[k];
    g[k] = (up - down) / (2.0 * h);
  }
  return g;
}

Point forward_gradient(const Objective& f, const Point& x) {
  Point g(x.size());
  Point y = x;
  const double f0 = f(x);
  for (size_t k = 0; k < x.size(); ++k) {
    const double h = std::max(1e-8, 1e-8 * std::fabs(x[k]));
    y[k] = x[k] + h;
    g[k] = (f(y) - f0) / h;
    y[k] = x[k];
  }
  return g;
}

SolveResult<DescentResult> projected_descent(
    const Objective& f, const Box& box,
    const std::vector<Halfspace>& halfspaces, const Point& start,
    const DescentOptions& options) {
  auto first = project(box, halfspaces, start, options.feasibility_tol);
  if (!first) {
    return SolveResult<DescentResult>::infeasible(
        "start cannot be projected onto the feasible set");
  }
  DescentResult out;
  out.point = *first;
  out.value = f(out.point);
  if (!std::isfinite(out.value)) {
    return SolveResult<DescentResult>::infeasible(
        "objective is not finite at the projected start");
  }
  double alpha = 1.0;
  int it = 0;
  for (; it < options.max_iterations; ++it) {
    // Central differences would step outside a bound that is active; use
    // the one-sided quotient there.
    Point g = central_gradient(f, out.point);
    for (double& gk : g) {
      if (!std::isfinite(gk)) {
        g = forward_gradient(f, out.point);
        break;
      }
    }
    bool accepted = false;
    double step = 0.0;
    for (int ls = 0; ls < 200; ++ls) {
      Point trial(out.point.size());
      for (size_t k = 0; k < trial.size(); ++k) {
        trial[k] = out.point[k] - alpha * g[k];
      }
      const auto projected = project(box, halfspaces, trial, options.feasibility_tol);
      if (projected) {
        const Point& y = *projected;
        double decrease = 0.0;
        step = 0.0;
        for (size_t k = 0; k < y.size(); ++k) {
          decrease += g[k] * (out.point[k] - y[k]);
          step = std::max(step, std::fabs(y[k] - out.point[k]));
        }
        const double v = f(y);
        if (std::isfinite(v) && v <= out.value - 1e-4 * decrease &&
            v <= out.value) {
          accepted = step > 0.0 && v < out.value;
          if (accepted) {
            out.point = y;
            out.value = v;
          }
          break;
        }
      }
      alpha *= 0.5;
      if (alpha < 1e-300) break;
    }
    if (!accepted || step < options.step_tol) break;
    alpha *= 2.0;
  }
  out.iterations = it;
  out.max_iterations_reached = it >= options.max_iterations;
  return SolveResult<DescentResult>::feasible(out);
}

SolveResult<Case1Reference> case1_reference(SplitIndices split,
                                            const Scenario& s,
                                            const Case1ReferenceOptions& options) {
  const TaskChain& chain = s.device_chain;
  const int n = chain.size();
  if (!(1 <= split.n1 && split.n1 <= split.n2 && split.n2 <= n + 1)) {
    throw std::invalid_argument("case1_reference: invalid split");
  }
  if (!s.deadlines.t_s) throw std::invalid_argument("case1_reference: needs t_s");
  const ChannelParams& ch = s.channel;
  const ComputeParams& c = s.compute;
  const double budget =
      *s.deadlines.t_s - sum_cycles(chain, split.n2, n + 1) / c.f_bs_max;

  // Variable kinds: per-task durations, then the two uploads.
  struct Var {
    int task = 0;  // 1-based task, or 0 for an upload
    double kappa = 0.0;
    double cycles = 0.0;
    double data = 0.0;
    double gain = 0.0;
    double lower = 0.0;
  };
  std::vector<Var> vars;
  for (int i = 1; i < split.n2; ++i) {
    if (chain.cycles(i) == 0.0) continue;
    const bool local = i < split.n1;
    const double cap = local ? c.f_md_max : c.f_relay_max;
    vars.push_back({i, local ? c.kappa_md : c.kappa_relay, chain.cycles(i), 0.0,
                    0.0, chain.cycles(i) / cap});
  }
  const double d1 = chain.data(split.n1);
  const double d2 = chain.data(split.n2);
  const int tau1_slot = d1 > 0.0 ? static_cast<int>(vars.size()) : -1;
  if (d1 > 0.0) vars.push_back({0, 0.0, 0.0, d1, ch.gain_md_relay, 0.0});
  const int tau2_slot = d2 > 0.0 ? static_cast<int>(vars.size()) : -1;
  if (d2 > 0.0) vars.push_back({0, 0.0, 0.0, d2, ch.gain_relay_bs, 0.0});

  double floor_sum = 0.0;
  for (const Var& v : vars) floor_sum += v.lower;
  if (budget < 0.0 || floor_sum > budget ||
      ((tau1_slot >= 0 || tau2_slot >= 0) && floor_sum >= budget)) {
    return SolveResult<Case1Reference>::infeasible("deadline cannot be met");
  }
  const size_t k = vars.size();
  if (k == 0) return SolveResult<Case1Reference>::feasible({});

  auto complete = [&](const Point& p) {
    Point x(p);
    double used = 0.0;
    for (double v : p) used += v;
    x.push_back(budget - used);
    return x;
  };
  auto energy = [&](const Point& x) {
    double e = 0.0;
    for (size_t i = 0; i < k; ++i) {
      const Var& v = vars[i];
      e += v.task > 0 ? cpu_energy(v.kappa, v.cycles, x[i])
                      : link_energy(v.data, x[i], v.gain, ch);
    }
    return e;
  };
  const Objective f = [&](const Point& p) { return energy(complete(p)); };
  const Predicate ok = [&](const Point& p) {
    const Point x = complete(p);
    for (size_t i = 0; i < k; ++i) {
      const bool upload = vars[i].task == 0;
      if (upload ? !(x[i] > 0.0) : x[i] < vars[i].lower) return false;
    }
    return true;
  };

  GridSpec spec;
  spec.rounds = options.rounds;
  int points = options.points;
  if (points == 0) {
    const size_t dims = k - 1;
    points = dims <= 2 ? 201 : dims == 3 ? 41 : dims == 4 ? 21 : 11;
  }
  for (size_t i = 0; i + 1 < k; ++i) {
    spec.axes.push_back({vars[i].lower, budget, points});
  }
  const auto grid = grid_minimize(f, ok, spec);
  if (!grid) return SolveResult<Case1Reference>::infeasible(grid.reason());

  const Point x = complete(grid->point);
  Case1Reference out;
  out.energy = energy(x);
  if (tau1_slot >= 0) out.tau1 = x[static_cast<size_t>(tau1_slot)];
  if (tau2_slot >= 0) out.tau2 = x[static_cast<size_t>(tau2_slot)];
  out.frequencies.assign(static_cast<size_t>(split.n2 - 1), 0.0);
  for (size_t i = 0; i < k; ++i) {
    if (vars[i].task > 0) {
      out.frequencies[static_cast<size_t>(vars[i].task - 1)] =
          vars[i].cycles / x[i];
    }
  }
  return SolveResult<Case1Reference>::feasible(out);
}

SchemeProblem scheme_problem(SchemeId scheme, Case2Indices idx,
                             const Scenario& s, bool free_gap) {
  if (!s.relay_chain || !s.deadlines.t0 || !s.deadlines.t_s_th ||
      !s.deadlines.t_r_th) {
    throw std::invalid_argument("scheme_problem: needs relay tasks and deadlines");
  }
  const TaskChain& dev = s.device_chain;
  const TaskChain& rel = *s.relay_chain;
  const int n = dev.size();
  const int m = rel.size();
  if (!(1 <= idx.n1 && idx.n1 <= idx.n2 && idx.n2 <= n + 1 && 1 <= idx.m1 &&
        idx.m1 <= m + 1)) {
    throw std::invalid_argument("scheme_problem: invalid indices");
  }
  const ChannelParams ch = s.channel;
  const ComputeParams c = s.compute;
  const double t0 = *s.deadlines.t0;
  const double ts = *s.deadlines.t_s_th;
  const double tr = *s.deadlines.t_r_th;
  const double d1 = dev.data(idx.n1);
  const double d2 = dev.data(idx.n2);
  const double d3 = rel.data(idx.m1);
  const double l1 = sum_cycles(dev, 1, idx.n1);
  const double l2 = sum_cycles(dev, idx.n1, idx.n2);
  const double l3 = sum_cycles(rel, 1, idx.m1);
  const double bs_device = sum_cycles(dev, idx.n2, n + 1) / c.f_bs_max;
  const double bs_relay = sum_cycles(rel, idx.m1, m + 1) / c.f_bs_max;

  SchemeProblem p;
  std::map<std::string, int> at;
  auto add = [&](const std::string& name, double hi) {
    at[name] = static_cast<int>(p.names.size());
    p.names.push_back(name);
    p.box.lo.push_back(0.0);
    p.box.hi.push_back(hi);
  };
  if (d1 > 0.0) add("tau1", ts);
  if (d2 > 0.0) add("tau2", ts);
  if (d3 > 0.0) add("tau3", tr);
  add("T1", ts);
  add("T2", ts);
  add("T3", tr);
  const bool gap = scheme == SchemeId::kS3 && free_gap;
  if (gap) add("tau0", tr);

  const size_t dims = p.names.size();
  auto row = [&](std::initializer_list<std::pair<const char*, double>> terms,
                 double rhs) {
    Halfspace h;
    h.a.assign(dims, 0.0);
    for (const auto& [name, coef] : terms) {
      const auto it = at.find(name);
      if (it != at.end()) h.a[static_cast<size_t>(it->second)] += coef;
    }
    h.b = rhs;
    p.constraints.push_back(h);
  };
  switch (scheme) {
    case SchemeId::kS1:
      row({{"T3", 1}, {"tau3", 1}, {"T1", -1}}, -t0);
      row({{"T3", 1}, {"tau3", 1}}, tr - t0 - bs_device - bs_relay);
      break;
    case SchemeId::kS2:
      row({{"T1", 1}, {"tau1", 1}, {"T2", 1}, {"tau2", 1}, {"T3", -1}}, t0);
      row({{"T1", 1}, {"tau1", 1}, {"T2", 1}, {"tau2", 1}},
          tr - bs_relay - bs_device);
      row({{"T2", 1}, {"T3", 1}, {"tau3", 1}}, tr - bs_relay - t0);
      break;
    case SchemeId::kS3:
      row({{"T1", 1}, {"tau1", 1}, {"T3", -1}}, t0);
      row({{"T3", 1}, {"tau3", 1}, {"T1", -1}, {"tau1", -1}, {"T2", -1}}, -t0);
      row({{"T3", 1}, {"tau3", 1}, {"tau0", 1}}, tr - t0 - bs_device - bs_relay);
      break;
  }
  row({{"T1", 1}, {"tau1", 1}, {"T2", 1}, {"tau2", 1}}, ts - bs_device);

  auto slot = [&](const char* name) {
    const auto it = at.find(name);
    return it == at.end() ? -1 : it->second;
  };
  const int s_tau1 = slot("tau1"), s_tau2 = slot("tau2"), s_tau3 = slot("tau3");
  const int s_t1 = slot("T1"), s_t2 = slot("T2"), s_t3 = slot("T3");
  p.energy = [=](const Point& x) {
    auto get = [&x](int k) { return k < 0 ? 0.0 : x[static_cast<size_t>(k)]; };
    return link_energy(d1, get(s_tau1), ch.gain_md_relay, ch) +
           link_energy(d2, get(s_tau2), ch.gain_relay_bs, ch) +
           link_energy(d3, get(s_tau3), ch.gain_relay_bs, ch) +
           cpu_energy(c.kappa_md, l1, get(s_t1)) +
           cpu_energy(c.kappa_relay, l2, get(s_t2)) +
           cpu_energy(c.kappa_relay, l3, get(s_t3));
  };
  return p;
}

SolveResult<SchemeReference> scheme_reference(
    SchemeId scheme, Case2Indices idx, const Scenario& s,
    const SchemeReferenceOptions& options) {
  const SchemeProblem p = scheme_problem(scheme, idx, s);
  GridSpec spec;
  spec.rounds = options.rounds;
  spec.refine_points = options.refine_points;
  // One common range and spacing on every axis: the constraint rows have
  // unit coefficients, so a shared lattice can slide along their faces.
  double top = 0.0;
  for (size_t k = 0; k < p.names.size(); ++k) top = std::max(top, p.box.hi[k]);
  for (size_t k = 0; k < p.names.size(); ++k) {
    spec.axes.push_back({0.0, top, options.coarse_points});
  }
  const Predicate ok = [&p](const Point& x) {
    for (size_t k = 0; k < x.size(); ++k) {
      if (x[k] < p.box.lo[k] || x[k] > p.box.hi[k]) return false;
    }
    for (const Halfspace& h : p.constraints) {
      if (dot(h.a, x) > h.b + 1e-12 * std::fabs(h.b)) return false;
    }
    return true;
  };
  const auto grid = grid_minimize(p.energy, ok, spec);
  if (!grid) return SolveResult<SchemeReference>::infeasible(grid.reason());
  return SolveResult<SchemeReference>::feasible(
      {p.names, grid->point, grid->value});
}

}  // namespace relaymec::oracle
