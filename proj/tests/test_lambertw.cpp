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

#include <chrono>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "relaymec/lambertw.hpp"
#include "relaymec/model.hpp"

namespace relaymec {
namespace {

// Plain Newton on w e^w - x, kept separate from the library's iteration.
long double newton_w(long double x) {
  long double w = x < 1.0L ? x : std::log(x);
  for (int i = 0; i < 200; ++i) {
    const long double f = w * std::exp(w) - x;
    const long double step = f / (std::exp(w) * (w + 1.0L));
    w -= step;
    if (std::fabs(step) < 1e-19L) break;
  }
  return w;
}

TEST(LambertW, Anchors) {
  EXPECT_EQ(lambert_w0(0.0), 0.0);
  EXPECT_NEAR(lambert_w0(std::numbers::e), 1.0, 1e-14);
  EXPECT_NEAR(lambert_w0(-1.0 / std::numbers::e), -1.0, 1e-14);
}

TEST(LambertW, OmegaConstant) {
  const long double w = newton_w(1.0L);
  ASSERT_LT(std::fabs(w * std::exp(w) - 1.0L), 1e-15L);
  EXPECT_NEAR(lambert_w0(1.0), static_cast<double>(w), 1e-15);
  EXPECT_NEAR(lambert_w0(1.0), 0.567143290409784, 1e-15);
}

TEST(LambertW, AgreesWithNewtonAwayFromBranchPoint) {
  for (double x : {-0.3, -0.1, 1e-8, 0.5, 2.0, 10.0, 1e3, 1e6, 1e9}) {
    const double w = static_cast<double>(newton_w(x));
    EXPECT_NEAR(lambert_w0(x), w, 2e-15 * std::max(1.0, std::fabs(w))) << x;
  }
}

TEST(LambertW, ResidualSweep) {
  const double lo = -1.0 / std::numbers::e;
  const auto start = std::chrono::steady_clock::now();
  const int n = 10000;
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    // Half the points crowd the branch point, half span [0, 1e9] in log.
    double x;
    if (k < n / 2) {
      x = lo * std::pow(10.0, -12.0 * k / (n / 2 - 1));
    } else {
      x = std::pow(10.0, -12.0 + 21.0 * (k - n / 2) / (n / 2 - 1));
    }
    const double w = lambert_w0(x);
    const double r = std::fabs(w * std::exp(w) - x) / std::max(1.0, std::fabs(x));
    worst = std::max(worst, r);
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_LE(worst, 1e-12);
  EXPECT_LT(seconds, 1.0);
}

TEST(LambertW, StrictlyIncreasing) {
  double prev = lambert_w0(-1.0 / std::numbers::e);
  for (int k = 1; k <= 2000; ++k) {
    const double x = -1.0 / std::numbers::e + std::pow(10.0, -8.0 + 17.0 * k / 2000.0);
    const double w = lambert_w0(x);
    EXPECT_GT(w, prev) << x;
    prev = w;
  }
}

TEST(LambertW, BelowBranchPoint) {
  EXPECT_THROW(lambert_w0(-0.4), ModelDomainError);
  EXPECT_NO_THROW(lambert_w0(-1.0 / std::numbers::e - 1e-17));
}

}  // namespace
}  // namespace relaymec
