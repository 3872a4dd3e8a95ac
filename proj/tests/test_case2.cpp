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

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "instances.hpp"
#include "relaymec/case1_solver.hpp"
#include "relaymec/case2_solver.hpp"

namespace relaymec {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<Case2Indices> all_indices(const Scenario& s) {
  std::vector<Case2Indices> out;
  const int n = s.device_chain.size();
  const int m = s.relay_chain->size();
  for (int n1 = 1; n1 <= n + 1; ++n1) {
    for (int n2 = n1; n2 <= n + 1; ++n2) {
      for (int m1 = 1; m1 <= m + 1; ++m1) out.push_back({n1, n2, m1});
    }
  }
  return out;
}

Scenario unit_scenario() {
  Scenario s;
  s.device_chain = TaskChain({{1.0, 1.0}});
  s.relay_chain = TaskChain({{1.0, 1.0}, {1.0, 1.0}});
  s.channel = {1.0, 1.0, 1.0, 1.0};
  s.compute = {1.0, 1.0, 10.0, 10.0, 10.0};
  s.deadlines.t_s_th = 10.0;
  s.deadlines.t0 = 0.0;
  s.deadlines.t_r_th = 20.0;
  return s;
}

TEST(T3FromTau3, CubeRootOfTwo) {
  const Scenario s = unit_scenario();
  const Case2Indices idx{1, 1, 2};  // one relay task kept, the next one uploaded
  const double t3 = t3_from_tau3(1.0, idx, s);
  EXPECT_NEAR(t3, std::cbrt(2.0), 1e-14);
  // Substituting back: 2 kappa L^3 / T3^3 = K(1) = e - (e - 1) = 1.
  EXPECT_NEAR(2.0 / (t3 * t3 * t3), 1.0, 1e-14);
}

TEST(T3FromTau3, DegenerateBlocks) {
  const Scenario s = unit_scenario();
  EXPECT_EQ(t3_from_tau3(0.7, {1, 1, 1}, s), 0.0);
  EXPECT_EQ(t3_from_tau3(0.7, {1, 1, 3}, s), kInf);
}

TEST(TauSMinimal, Examples) {
  Scenario s = unit_scenario();
  EXPECT_EQ(tau_s_minimal({1, 2, 1}, s), 0.0);
  s.device_chain = TaskChain({{1.0, 1e9}});
  s.compute.f_bs_max = 1e9;
  EXPECT_EQ(tau_s_minimal({1, 1, 1}, s), 1.0);
}

TEST(CheckIndices, Bounds) {
  const Scenario s = unit_scenario();
  EXPECT_NO_THROW(check_indices({2, 2, 3}, s));
  EXPECT_THROW(check_indices({2, 1, 1}, s), std::invalid_argument);
  EXPECT_THROW(check_indices({1, 1, 4}, s), std::invalid_argument);
  EXPECT_THROW(check_indices({0, 1, 1}, s), std::invalid_argument);
}

TEST(Scheme1Evaluate, OrderingBranchPinsT1) {
  testing::InstanceGenerator gen(31);
  Scenario s = gen.busy(2, 2);
  const Case2Indices idx{2, 3, 2};
  const double tau3 = 0.05 * *s.deadlines.t_s_th;
  // Large psi shrinks the free T1 below the ordering bound.
  for (double psi : {1e-2, 1e0, 1e2}) {
    const auto x = scheme1_evaluate(psi, tau3, idx, s);
    if (!x) continue;
    const double bound = *s.deadlines.t0 + x->T3 + x->tau3;
    const Case2Blocks b = case2_blocks(idx, s);
    const double free_t1 = b.l_local * std::cbrt(2.0 * s.compute.kappa_md / psi);
    if (free_t1 < bound) {
      EXPECT_EQ(x->T1, bound);
    } else {
      EXPECT_EQ(x->T1, free_t1);
    }
  }
}

TEST(Scheme1Evaluate, LargePsiShrinksTimes) {
  testing::InstanceGenerator gen(32);
  Scenario s = gen.busy(2, 2);
  s.deadlines.t_s_th = 1e3;
  s.deadlines.t_r_th = 2e3;
  const Case2Indices idx{1, 2, 2};
  const double tau3 = 0.01;
  double prev_t = kInf;
  double prev_t2 = 0.0;
  double prev_cpu = 0.0;
  for (int k = 0; k < 12; ++k) {
    const auto x = scheme1_evaluate(std::pow(10.0, -4.0 + 3.0 * k), tau3, idx, s);
    ASSERT_TRUE(x.has_value());
    const double t = x->tau1 + x->tau2 + x->T2;
    EXPECT_LT(t, prev_t);
    // The relay block scales as psi^(-1/3).
    if (k > 0) EXPECT_NEAR(x->T2 / prev_t2, 0.1, 1e-12);
    const Case2EnergyBreakdown e = case2_energy(idx, *x, s);
    EXPECT_GT(e.cpu_relay_device, prev_cpu);
    prev_t = t;
    prev_t2 = x->T2;
    prev_cpu = e.cpu_relay_device;
  }
}

TEST(SolveScheme1, ClosedFormMatchesInteriorPoint) {
  testing::InstanceGenerator gen(33);
  for (int inst = 0; inst < 8; ++inst) {
    Scenario s = gen.busy(2, 2);
    for (const auto& idx : all_indices(s)) {
      const auto a = solve_scheme1(idx, s);
      const auto b = solve_scheme_numeric(SchemeId::kS1, idx, s);
      ASSERT_EQ(a.ok(), b.ok()) << inst << " " << idx.n1 << idx.n2 << idx.m1;
      if (!a.ok()) continue;
      EXPECT_NEAR(a->energy, b->energy, 1e-6 * b->energy);
      EXPECT_TRUE(check_scheme_constraints(SchemeId::kS1, idx, a.value(), s).empty());
    }
  }
}

TEST(SolveScheme1, StationarityAtClosedFormOptima) {
  testing::InstanceGenerator gen(34);
  int interior = 0;
  for (int inst = 0; inst < 15; ++inst) {
    Scenario s = gen.busy(2, 2);
    // A tight relay deadline is what frees T1 from the ordering bound.
    if (inst % 2 == 1) s.deadlines.t_r_th = *s.deadlines.t_s_th * gen.uniform(1.0, 1.3);
    for (const auto& idx : all_indices(s)) {
      const auto a = solve_scheme1(idx, s);
      if (!a.ok() || a->path != "closed-form") continue;
      const Scheme1KktReport kkt = scheme1_kkt_residuals(idx, a.value(), s);
      if (!kkt.ordering_active) ++interior;
      EXPECT_LE(kkt.max_rel_residual, 1e-4)
          << inst << " (" << idx.n1 << "," << idx.n2 << "," << idx.m1 << ")";
    }
  }
  EXPECT_GT(interior, 0);
}

TEST(SolveScheme1, InfeasibleWhenBaseStationWorkAloneMissesDeadline) {
  testing::InstanceGenerator gen(35);
  Scenario s = gen.busy(2, 1);
  const double bs_time = s.device_chain.cycles_in(1, 3) / s.compute.f_bs_max;
  s.deadlines.t_s_th = 0.9 * bs_time;
  s.deadlines.t0 = 0.0;
  const auto r = solve_scheme1({1, 1, 1}, s);
  ASSERT_FALSE(r.ok());
  EXPECT_NE(r.reason().find("infeasible scheme"), std::string::npos);
}

TEST(SolveScheme1, TighterRelayDeadlineNeverHelps) {
  testing::InstanceGenerator gen(36);
  for (int inst = 0; inst < 10; ++inst) {
    Scenario s = gen.busy(2, 2);
    const Case2Indices idx{1, 2, 2};
    double prev = 0.0;
    for (double f : {3.0, 2.0, 1.5, 1.2, 1.0}) {
      Scenario t = s;
      t.deadlines.t_r_th = *s.deadlines.t_s_th * f;
      const auto r = solve_scheme1(idx, t);
      if (!r.ok()) break;
      EXPECT_GE(r->energy, prev * (1.0 - 1e-9));
      prev = r->energy;
    }
  }
}

TEST(SolveScheme, ConstraintsHoldForEveryScheme) {
  testing::InstanceGenerator gen(37);
  for (int inst = 0; inst < 4; ++inst) {
    Scenario s = gen.busy(2, 2);
    for (SchemeId sc : {SchemeId::kS1, SchemeId::kS2, SchemeId::kS3}) {
      for (const auto& idx : all_indices(s)) {
        const auto r = solve_scheme(sc, idx, s);
        if (!r.ok()) continue;
        const auto bad = check_scheme_constraints(sc, idx, r.value(), s);
        EXPECT_TRUE(bad.empty()) << scheme_name(sc) << ": " << (bad.empty() ? "" : bad[0]);
        EXPECT_NEAR(case2_objective(idx, r.value(), s), r->energy, 1e-12 * r->energy);
      }
    }
  }
}

TEST(SolveScheme, DeviceFirstWinsWhenRelayTaskArrivesLate) {
  testing::InstanceGenerator gen(38);
  Scenario s = gen.busy(2, 1);
  s.relay_chain = TaskChain({{1e5, 4e8}});
  s.deadlines.t0 = 0.5 * *s.deadlines.t_s_th;
  const Case2Indices idx{1, 2, 2};  // device offloads everything, relay keeps its task
  const auto s1 = solve_scheme(SchemeId::kS1, idx, s);
  const auto s2 = solve_scheme(SchemeId::kS2, idx, s);
  ASSERT_TRUE(s2.ok()) << s2.reason();
  if (s1.ok()) EXPECT_LT(s2->energy, s1->energy);
}

TEST(SolveScheme, TrivialChainsCostNothing) {
  Scenario s;
  s.device_chain = TaskChain({{0.0, 0.0}});
  s.relay_chain = TaskChain({{0.0, 0.0}});
  s.channel = {1e6, 1e-7, 1e-7, 1e-9};
  s.compute = {1e-27, 1e-27, 1e9, 2e9, 1e10};
  s.deadlines.t_s_th = 0.1;
  s.deadlines.t0 = 0.0;
  s.deadlines.t_r_th = 0.2;
  for (SchemeId sc : {SchemeId::kS1, SchemeId::kS2, SchemeId::kS3}) {
    const auto r = solve_scheme(sc, {1, 1, 1}, s);
    ASSERT_TRUE(r.ok()) << r.reason();
    EXPECT_EQ(r->energy, 0.0);
    EXPECT_EQ(r->tau1, 0.0);
    EXPECT_EQ(r->tau2, 0.0);
    EXPECT_EQ(r->tau3, 0.0);
    EXPECT_EQ(r->tau_s, 0.0);
  }
  const auto all = solve_case2(s);
  ASSERT_TRUE(all.ok());
  EXPECT_EQ(all->lower.energy, 0.0);
}

TEST(SolveScheme, FreeGapInThirdSchemeNeverHelps) {
  testing::InstanceGenerator gen(39);
  Case2Options free;
  free.scheme3_free_gap = true;
  for (int inst = 0; inst < 6; ++inst) {
    Scenario s = gen.busy(2, 1);
    for (const auto& idx : all_indices(s)) {
      const auto fixed = solve_scheme(SchemeId::kS3, idx, s);
      const auto freed = solve_scheme(SchemeId::kS3, idx, s, free);
      ASSERT_EQ(fixed.ok(), freed.ok());
      if (!fixed.ok()) continue;
      EXPECT_GE(freed->energy, fixed->energy * (1.0 - 1e-6));
    }
  }
}

TEST(SolveCase2, DominatesEveryScheme) {
  testing::InstanceGenerator gen(40);
  for (int inst = 0; inst < 3; ++inst) {
    Scenario s = gen.busy(2, 1);
    const auto best = solve_case2(s);
    ASSERT_TRUE(best.ok()) << best.reason();
    for (SchemeId sc : {SchemeId::kS1, SchemeId::kS2, SchemeId::kS3}) {
      for (const auto& idx : all_indices(s)) {
        const auto r = solve_scheme(sc, idx, s);
        if (r.ok()) EXPECT_LE(best->lower.energy, r->energy * (1.0 + 1e-12));
      }
    }
    EXPECT_NEAR(best->energy_breakdown.total(), best->lower.energy,
                1e-12 * best->lower.energy);
  }
}

TEST(SolveCase2, SerialEqualsParallel) {
  testing::InstanceGenerator gen(41);
  for (int inst = 0; inst < 4; ++inst) {
    Scenario s = gen.busy(2, 2);
    const auto a = solve_case2_serial(s);
    const auto b = solve_case2(s);
    ASSERT_EQ(a.ok(), b.ok());
    if (!a.ok()) continue;
    EXPECT_EQ(a->scheme, b->scheme);
    EXPECT_EQ(a->indices, b->indices);
    EXPECT_EQ(a->lower.energy, b->lower.energy);
  }
}

TEST(SolveCase2, GloballyInfeasible) {
  testing::InstanceGenerator gen(42);
  Scenario s = gen.busy(2, 2);
  // Caps are not enforced here, so only a relay deadline that has already
  // passed when the relay's work arrives rules out every plan.
  s.deadlines.t_r_th = *s.deadlines.t0;
  const auto r = solve_case2(s);
  ASSERT_FALSE(r.ok());
  EXPECT_NE(r.reason().find("globally infeasible"), std::string::npos);
}

TEST(SolveCase2, ExitOnlyRelayChainReducesToIdleRelay) {
  testing::InstanceGenerator gen(43);
  for (int inst = 0; inst < 3; ++inst) {
    Scenario idle = gen.idle(2);
    idle.compute.f_md_max = 1e12;
    idle.compute.f_relay_max = 1e12;
    idle.compute.f_bs_max = 1e12;
    Scenario busy = idle;
    busy.relay_chain = TaskChain();
    busy.deadlines.t0 = 0.0;
    busy.deadlines.t_s_th = idle.deadlines.t_s;
    busy.deadlines.t_r_th = 2.0 * *idle.deadlines.t_s;
    busy.deadlines.t_s.reset();
    const auto one = solve_case1(idle);
    const auto two = solve_case2(busy);
    ASSERT_TRUE(one.ok() && two.ok());
    EXPECT_NEAR(two->lower.energy, one->lower.energy, 0.005 * one->lower.energy);
  }
}

TEST(CapViolations, ReportedNotEnforced) {
  testing::InstanceGenerator gen(44);
  Scenario s = gen.busy(2, 1);
  const Case2Indices idx{3, 3, 1};
  const Case2Blocks b = case2_blocks(idx, s);
  Case2LowerSolution x;
  x.T1 = b.l_local / (2.0 * s.compute.f_md_max);
  const auto v = cap_violations(idx, x, s);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].find("device"), std::string::npos);
  x.T1 = b.l_local / s.compute.f_md_max;
  EXPECT_TRUE(cap_violations(idx, x, s).empty());
}

}  // namespace
}  // namespace relaymec
