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

#include "relaymec/lambertw.hpp"

#include <cmath>
#include <limits>

#include "relaymec/model.hpp"

namespace relaymec {

namespace {

// 1/e split into a double and its rounding remainder so that x + 1/e keeps
// full relative precision next to the branch point.
constexpr double kInvEHi = 0.36787944117144233;
constexpr double kInvELo = -1.2428753672788363e-17;
constexpr double kE = 2.718281828459045;

// Puiseux series about the branch point in p = sqrt(2 (e x + 1)).
double branch_series(double p) {
  return -1.0 +
         p * (1.0 + p * (-1.0 / 3.0 +
                         p * (11.0 / 72.0 +
                              p * (-43.0 / 540.0 + p * (769.0 / 17280.0)))));
}

double initial_guess(double x, double shifted) {
  if (shifted < 0.25) return branch_series(std::sqrt(2.0 * kE * shifted));
  if (x < 3.0) {
    // Winitzki's uniform approximation.
    const double l = std::log1p(x);
    return l * (1.0 - std::log1p(l) / (2.0 + l));
  }
  const double l1 = std::log(x);
  const double l2 = std::log(l1);
  return l1 - l2 + l2 / l1;
}

}  // namespace

double lambert_w0(double x) {
  if (std::isnan(x)) return x;
  if (x == 0.0) return 0.0;
  if (std::isinf(x) && x > 0) return x;

  const double shifted = (x + kInvEHi) + kInvELo;
  if (shifted <= 0.0) {
    if (shifted >= -kLambertBranchClamp) return -1.0;
    throw ModelDomainError("lambert_w0: argument below -1/e");
  }
  // Close enough to the branch point that the series is exact to rounding.
  if (shifted < 1e-9) return branch_series(std::sqrt(2.0 * kE * shifted));

  double w = initial_guess(x, shifted);
  if (x > 1e300) {
    // Newton on w + ln w = ln x keeps e^w out of the picture.
    const double lx = std::log(x);
    for (int i = 0; i < 50; ++i) {
      const double step = (w + std::log(w) - lx) / (1.0 + 1.0 / w);
      w -= step;
      if (std::fabs(step) <= 1e-16 * w) break;
    }
    return w;
  }

  constexpr double kEps = std::numeric_limits<double>::epsilon();
  for (int i = 0; i < 64; ++i) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    if (f == 0.0) break;
    const double wp1 = w + 1.0;
    const double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    w -= step;
    if (std::fabs(step) <= 2.0 * kEps * (1.0 + std::fabs(w))) break;
  }
  return w < -1.0 ? -1.0 : w;
}

}  // namespace relaymec
