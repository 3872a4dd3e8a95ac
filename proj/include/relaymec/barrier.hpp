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

// Log-barrier interior-point method for the busy-relay lower problems:
// a separable convex objective in time variables (transmission and DVFS
// energies) under linear inequality constraints and variable lower bounds.

#pragma once

#include <string>
#include <utility>
#include <vector>

namespace relaymec::convex {

struct Term {
  enum class Kind { kNone, kTransmission, kCompute };
  Kind kind = Kind::kNone;
  // kTransmission: coef * x * expm1(param / x), coef = sigma^2 / gain,
  //                param = d / B.
  // kCompute:      coef / x^2, coef = kappa * L^3.
  double coef = 0.0;
  double param = 0.0;

  double value(double x) const;
  double first(double x) const;
  double second(double x) const;
};

// sum_k coeffs[k].second * x[coeffs[k].first] <= rhs
struct Row {
  std::vector<std::pair<int, double>> coeffs;
  double rhs = 0.0;
  std::string name;
};

struct Program {
  std::vector<Term> objective;  // one per variable
  std::vector<double> lower;    // strict lower bounds, x > lower
  std::vector<Row> rows;
  double time_scale = 1.0;      // typical magnitude of the variables
};

struct Options {
  double gap_tol = 1e-12;  // duality gap relative to the starting energy
  double growth = 10.0;    // barrier parameter multiplier per outer step
  int max_newton = 100;    // per centering step
};

struct Result {
  bool feasible = false;
  std::string reason;
  std::vector<double> x;
  double value = 0.0;
  std::vector<double> row_duals;    // multipliers of `rows`
  std::vector<double> bound_duals;  // multipliers of `lower`
  int newton_steps = 0;
};

Result minimize(const Program& program, const Options& options = {});

}  // namespace relaymec::convex
