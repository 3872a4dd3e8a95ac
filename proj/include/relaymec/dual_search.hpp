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

// Root search on a Lagrange multiplier that prices a time budget. Both the
// idle-relay and busy-relay solvers reduce their lower-level problem to
// "find the smallest multiplier whose induced schedule fits the budget",
// where the induced completion time is non-increasing in the multiplier.

#pragma once

#include <functional>

namespace relaymec {

struct DualSearchOptions {
  double rel_tol = 1e-9;     // stop once |lhs - budget| <= rel_tol * budget
  int max_iterations = 200;  // bisection steps
  int max_doublings = 200;   // upper-bracket growth steps
  double floor = 1e-18;      // initial lower bracket
};

struct DualSearchResult {
  bool feasible = false;
  double dual = 0.0;
  double lhs = 0.0;  // completion time at `dual`, always <= budget if feasible
  int iterations = 0;
};

// `lhs` must be non-increasing. `seed` is the first upper-bracket guess.
// Bisection runs on log(dual) since multipliers span many decades.
DualSearchResult search_dual(const std::function<double(double)>& lhs,
                             double budget, double seed,
                             const DualSearchOptions& options = {});

}  // namespace relaymec
