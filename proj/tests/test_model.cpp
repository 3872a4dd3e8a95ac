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
#include <numbers>

#include <gtest/gtest.h>

#include "instances.hpp"
#include "relaymec/model.hpp"

namespace relaymec {
namespace {

ChannelParams unit_channel() { return {1.0, 1.0, 1.0, 1.0}; }

bool mentions(const std::vector<Violation>& vs, const std::string& text) {
  for (const auto& v : vs) {
    if (v.message.find(text) != std::string::npos) return true;
  }
  return false;
}

TEST(TransmissionEnergy, ZeroDataIsFree) {
  EXPECT_EQ(transmission_energy(0.0, 0.5, 1.0, unit_channel()), 0.0);
  EXPECT_EQ(transmission_energy(0.0, 0.0, 1.0, unit_channel()), 0.0);
}

TEST(TransmissionEnergy, ExponentCollapsesToLog2) {
  ChannelParams ch{3.0, 1.0, 2.0, 1.0};
  const double d = ch.bandwidth * 1.0 * std::numbers::ln2;
  EXPECT_NEAR(transmission_energy(d, 1.0, 2.0, ch), 0.5, 1e-15);
}

TEST(TransmissionEnergy, UnitInputsGiveEMinusOne) {
  EXPECT_NEAR(transmission_energy(1.0, 1.0, 1.0, unit_channel()),
              std::numbers::e - 1.0, 1e-15);
}

TEST(TransmissionEnergy, RejectsBadDomain) {
  EXPECT_THROW(transmission_energy(1.0, 0.0, 1.0, unit_channel()), ModelDomainError);
  EXPECT_THROW(transmission_energy(1.0, -1.0, 1.0, unit_channel()), ModelDomainError);
  EXPECT_THROW(transmission_energy(1.0, 1.0, 0.0, unit_channel()), ModelDomainError);
}

TEST(TransmissionEnergy, StrictlyConvexAndDecreasing) {
  ChannelParams ch{1e6, 1e-7, 1e-7, 1e-9};
  const double d = 1e5;
  for (int k = 0; k < 200; ++k) {
    const double tau = 0.02 * std::pow(10.0, 2.0 * k / 199.0);  // 0.02 .. 2 s
    const double h = 1e-4 * tau;
    const double lo = transmission_energy(d, tau - h, ch.gain_md_relay, ch);
    const double mid = transmission_energy(d, tau, ch.gain_md_relay, ch);
    const double hi = transmission_energy(d, tau + h, ch.gain_md_relay, ch);
    EXPECT_GT(lo, mid);
    EXPECT_GT(mid, hi);
    EXPECT_GT((lo - 2.0 * mid + hi) / (h * h), 0.0) << "tau=" << tau;
  }
}

TEST(TransmissionEnergy, LongDurationLimit) {
  ChannelParams ch{2e6, 3e-7, 3e-7, 1e-9};
  const double d = 5e4;
  const double limit = ch.noise * d / (ch.bandwidth * ch.gain_md_relay);
  const double e = transmission_energy(d, 1e6 * d / ch.bandwidth, ch.gain_md_relay, ch);
  EXPECT_NEAR(e, limit, 0.01 * limit);
}

TEST(TransmissionEnergy, SlopeKernelMatchesDerivative) {
  ChannelParams ch{1e6, 1e-7, 1e-7, 1e-9};
  const double d = 1e5;
  for (double tau : {0.03, 0.1, 0.7, 4.0}) {
    const double h = 1e-6 * tau;
    const double fd = (transmission_energy(d, tau + h, 1e-7, ch) -
                       transmission_energy(d, tau - h, 1e-7, ch)) /
                      (2.0 * h);
    const double slope = -ch.noise / 1e-7 *
                         transmission_slope_kernel(d / (ch.bandwidth * tau));
    EXPECT_NEAR(fd, slope, 1e-6 * std::fabs(slope));
  }
  EXPECT_EQ(transmission_slope_kernel(0.0), 0.0);
  EXPECT_GT(transmission_slope_kernel(1e-9), 0.0);
}

TEST(ComputeEnergy, Examples) {
  EXPECT_EQ(compute_energy(0.0, 1e9, 1e-27), 0.0);
  EXPECT_NEAR(compute_energy(1e6, 1e9, 1e-27), 1e-3, 1e-18);
  EXPECT_EQ(compute_energy(3.0, 5.0, 2.0), 150.0);
}

TEST(ComputeTime, Examples) {
  EXPECT_EQ(compute_time(0.0, 123.0), 0.0);
  EXPECT_EQ(compute_time(1e6, 2e6), 0.5);
  EXPECT_EQ(compute_time(7.0, 7.0), 1.0);
}

TEST(ComputeTime, ZeroFrequencyWithWork) {
  try {
    compute_time(1.0, 0.0);
    FAIL() << "expected a domain error";
  } catch (const ModelDomainError& e) {
    EXPECT_STREQ(e.what(), "frequency must be positive for nonzero work");
  }
}

TEST(ComputeEnergy, EnergyTimesTimeIdentity) {
  testing::InstanceGenerator gen(11);
  for (int k = 0; k < 1000; ++k) {
    // Powers of two keep every product exact.
    const double l = std::ldexp(1.0, gen.integer(0, 40));
    const double f = std::ldexp(1.0, gen.integer(1, 40));
    const double kappa = std::ldexp(1.0, -gen.integer(60, 100));
    EXPECT_EQ(compute_energy(l, f, kappa) * compute_time(l, f), kappa * l * l * f);
  }
}

TEST(ComputeEnergy, EnergyTimesTimeOnRandomReals) {
  testing::InstanceGenerator gen(12);
  for (int k = 0; k < 1000; ++k) {
    const double l = gen.log_uniform(1e3, 1e9);
    const double f = gen.log_uniform(1e6, 1e10);
    const double kappa = gen.log_uniform(1e-29, 1e-26);
    const double lhs = compute_energy(l, f, kappa) * compute_time(l, f);
    EXPECT_NEAR(lhs, kappa * l * l * f, 4e-16 * lhs);
  }
}

TEST(TaskChain, ExitTaskAndRanges) {
  TaskChain chain({{10.0, 100.0}, {20.0, 200.0}});
  EXPECT_EQ(chain.data(3), 0.0);
  EXPECT_EQ(chain.cycles(3), 0.0);
  EXPECT_EQ(chain.cycles_in(1, 3), 300.0);
  EXPECT_EQ(chain.cycles_in(2, 2), 0.0);
  EXPECT_THROW(chain.at(0), std::out_of_range);
  EXPECT_THROW(chain.at(4), std::out_of_range);
}

TEST(ValidateScenario, WellFormedIdle) {
  testing::InstanceGenerator gen(1);
  EXPECT_TRUE(validate_scenario(gen.idle(3)).empty());
}

TEST(ValidateScenario, WellFormedBusy) {
  testing::InstanceGenerator gen(2);
  EXPECT_FALSE(has_errors(validate_scenario(gen.busy(3, 2))));
}

TEST(ValidateScenario, ZeroNoise) {
  testing::InstanceGenerator gen(3);
  Scenario s = gen.idle(2);
  s.channel.noise = 0.0;
  const auto vs = validate_scenario(s);
  EXPECT_TRUE(has_errors(vs));
  EXPECT_TRUE(mentions(vs, "noise must be positive"));
}

TEST(ValidateScenario, DeadlineOrdering) {
  testing::InstanceGenerator gen(4);
  Scenario s = gen.busy(2, 2);
  s.deadlines.t_s_th = *s.deadlines.t_r_th * 1.5;
  const auto vs = validate_scenario(s);
  EXPECT_TRUE(has_errors(vs));
  EXPECT_TRUE(mentions(vs, "deadline ordering"));
}

TEST(ValidateScenario, ImpossibleDeadlineIsOnlyAWarning) {
  testing::InstanceGenerator gen(5);
  Scenario s = gen.idle(2);
  s.deadlines.t_s = 1e-9;
  const auto vs = validate_scenario(s);
  ASSERT_FALSE(vs.empty());
  EXPECT_FALSE(has_errors(vs));
}

TEST(ValidateScenario, NegativeCycles) {
  testing::InstanceGenerator gen(6);
  Scenario s = gen.idle(2);
  std::vector<Task> tasks = s.device_chain.tasks();
  tasks[1].cycles = -1.0;
  s.device_chain = TaskChain(tasks);
  const auto vs = validate_scenario(s);
  ASSERT_TRUE(has_errors(vs));
  EXPECT_EQ(vs.front().field, "device_tasks[1].cycles");
}

}  // namespace
}  // namespace relaymec
