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

#include "relaymec/dual_search.hpp"

#include <cmath>

namespace relaymec {

DualSearchResult search_dual(const std::function<double(double)>& lhs,
                             double budget, double seed,
                             const DualSearchOptions& options) {
  DualSearchResult out;
  double hi = seed > 0.0 ? seed : 1.0;
  double lhs_hi = lhs(hi);
  for (int k = 0; k < options.max_doublings && !(lhs_hi <= budget); ++k) {
    hi *= 2.0;
    lhs_hi = lhs(hi);
  }
  if (!(lhs_hi <= budget)) return out;

  double lo = std::fmin(options.floor, hi * 0.5);
  double lhs_lo = lhs(lo);
  // Push the lower bracket down until the budget is violated there.
  for (int k = 0; k < 20 && lhs_lo <= budget && lo > 1e-300; ++k) {
    lo *= 1e-12;
    lhs_lo = lhs(lo);
  }
  out.feasible = true;
  if (lhs_lo <= budget) {
    // Budget slack for every positive multiplier.
    out.dual = lo;
    out.lhs = lhs_lo;
    return out;
  }

  int it = 0;
  for (; it < options.max_iterations; ++it) {
    if (lhs_hi >= budget * (1.0 - options.rel_tol)) break;
    const double mid = std::sqrt(lo) * std::sqrt(hi);
    if (!(mid > lo && mid < hi)) break;
    const double v = lhs(mid);
    if (v > budget) {
      lo = mid;
    } else {
      hi = mid;
      lhs_hi = v;
    }
  }
  out.dual = hi;
  out.lhs = lhs_hi;
  out.iterations = it;
  return out;
}

}  // namespace relaymec
