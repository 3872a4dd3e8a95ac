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

// Slow, simple reference solvers for cross-checking the production
// solvers: shrinking grid search, projected numeric-gradient descent, and
// direct formulations of the lower problems with every variable free.
// Nothing here calls into the solver modules.

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "relaymec/case1_solver.hpp"
#include "relaymec/case2_solver.hpp"
#include "relaymec/model.hpp"
#include "relaymec/parallel.hpp"
#include "relaymec/result.hpp"

namespace relaymec::oracle {

using Point = std::vector<double>;
using Objective = std::function<double(const Point&)>;
using Predicate = std::function<bool(const Point&)>;

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  int points = 2;
};

struct GridSpec {
  std::vector<Axis> axes;
  int rounds = 1;
  int refine_points = 0;  // points per axis after round 1; 0 keeps `points`
};

struct GridResult {
  Point point;
  double value = 0.0;
  std::vector<double> round_values;  // incumbent after each round
};

// Best feasible grid point; each round shrinks every axis 5x around the
// incumbent. Infeasible result reads "no feasible point found".
SolveResult<GridResult> grid_minimize(
    const Objective& f, const Predicate& feasible, const GridSpec& spec,
    ExecutionMode mode = ExecutionMode::kParallel);

// a . x <= b
struct Halfspace {
  Point a;
  double b = 0.0;
};

struct Box {
  Point lo;
  Point hi;
};

// Euclidean projection onto box and halfspaces (Dykstra). nullopt if the
// iteration ends with a residual above `tol`.
std::optional<Point> project(const Box& box,
                             const std::vector<Halfspace>& halfspaces,
                             const Point& x, double tol = 1e-12);

// Largest violation of the box and halfspaces at x (0 if feasible).
double residual(const Box& box, const std::vector<Halfspace>& halfspaces,
                const Point& x);

Point central_gradient(const Objective& f, const Point& x);
Point forward_gradient(const Objective& f, const Point& x);

struct DescentOptions {
  double step_tol = 1e-12;
  int max_iterations = 100000;
  double feasibility_tol = 1e-9;
};

struct DescentResult {
  Point point;
  double value = 0.0;
  int iterations = 0;
  bool max_iterations_reached = false;
};

// Projected gradient descent with Armijo backtracking. Fails only when the
// start cannot be projected to a feasible point of finite value.
SolveResult<DescentResult> projected_descent(
    const Objective& f, const Box& box,
    const std::vector<Halfspace>& halfspaces, const Point& start,
    const DescentOptions& options = {});

// Idle-relay lower problem with a separate duration per task.
struct Case1Reference {
  double energy = 0.0;
  double tau1 = 0.0;
  double tau2 = 0.0;
  std::vector<double> frequencies;  // tasks 1..n2-1
};

struct Case1ReferenceOptions {
  int points = 0;  // per axis; 0 picks by dimension
  int rounds = 20;
};

SolveResult<Case1Reference> case1_reference(
    SplitIndices split, const Scenario& s,
    const Case1ReferenceOptions& options = {});

// Busy-relay lower problem of one scheme in explicit form. Variables, in
// order: tau1, tau2, tau3 (each only when its data is nonzero), T1, T2, T3,
// and tau0 for S3 when `free_gap`. tau_s is fixed at its minimum.
struct SchemeProblem {
  std::vector<std::string> names;
  Objective energy;
  Box box;
  std::vector<Halfspace> constraints;
};

SchemeProblem scheme_problem(SchemeId scheme, Case2Indices indices,
                             const Scenario& s, bool free_gap = false);

struct SchemeReferenceOptions {
  int coarse_points = 20;
  int refine_points = 9;
  int rounds = 40;
};

struct SchemeReference {
  std::vector<std::string> names;
  Point point;
  double energy = 0.0;
};

SolveResult<SchemeReference> scheme_reference(
    SchemeId scheme, Case2Indices indices, const Scenario& s,
    const SchemeReferenceOptions& options = {});

}  // namespace relaymec::oracle
