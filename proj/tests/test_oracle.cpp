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

#include <gtest/gtest.h>

#include "instances.hpp"
#include "relaymec/oracle.hpp"

namespace relaymec::oracle {
namespace {

const Predicate kAlways = [](const Point&) { return true; };

Point box_center(const Box& box) {
  Point c(box.lo.size());
  for (size_t k = 0; k < c.size(); ++k) c[k] = 0.5 * (box.lo[k] + box.hi[k]);
  return c;
}

TEST(GridMinimize, Quadratic) {
  GridSpec spec{{{0.0, 2.0, 101}}, 3, 0};
  const auto r = grid_minimize([](const Point& x) { return (x[0] - 1.0) * (x[0] - 1.0); },
                               kAlways, spec);
  ASSERT_TRUE(r.ok());
  EXPECT_NEAR(r->point[0], 1.0, 1e-4);
}

TEST(GridMinimize, NothingFeasible) {
  GridSpec spec{{{0.0, 1.0, 11}, {0.0, 1.0, 11}}, 2, 0};
  const auto r = grid_minimize([](const Point& x) { return x[0] + x[1]; },
                               [](const Point&) { return false; }, spec);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.reason(), "no feasible point found");
}

TEST(GridMinimize, RejectsBadAxes) {
  GridSpec spec{{{1.0, 1.0, 11}}, 2, 0};
  EXPECT_THROW(grid_minimize([](const Point&) { return 0.0; }, kAlways, spec),
               std::invalid_argument);
}

TEST(GridMinimize, RoundsNeverGetWorse) {
  testing::InstanceGenerator gen(61);
  for (int inst = 0; inst < 10; ++inst) {
    const double a = gen.uniform(0.1, 0.9), b = gen.uniform(0.1, 0.9);
    const double c = gen.uniform(0.5, 1.5);
    const Objective f = [&](const Point& x) {
      return std::pow(x[0] - a, 2) + c * std::pow(x[1] - b, 2) + std::sin(7.0 * x[0] * x[1]);
    };
    const Predicate ok = [](const Point& x) { return x[0] + x[1] <= 1.2; };
    GridSpec spec{{{0.0, 1.0, 13}, {0.0, 1.0, 13}}, 12, 7};
    const auto r = grid_minimize(f, ok, spec);
    ASSERT_TRUE(r.ok());
    ASSERT_EQ(r->round_values.size(), 12u);
    for (size_t k = 1; k < r->round_values.size(); ++k) {
      EXPECT_LE(r->round_values[k], r->round_values[k - 1]);
    }
  }
}

TEST(GridMinimize, SerialEqualsParallel) {
  const Objective f = [](const Point& x) {
    return std::cos(3.0 * x[0]) + x[1] * x[1] - x[0] * x[1] + 0.1 * x[2];
  };
  GridSpec spec{{{-1.0, 1.0, 21}, {-1.0, 1.0, 21}, {-1.0, 1.0, 21}}, 6, 9};
  const auto a = grid_minimize(f, kAlways, spec, ExecutionMode::kSerial);
  const auto b = grid_minimize(f, kAlways, spec, ExecutionMode::kParallel);
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_EQ(a->point, b->point);
  EXPECT_EQ(a->value, b->value);
}

TEST(Project, OntoHalfspaceAndBox) {
  const Box box{{0.0, 0.0}, {2.0, 2.0}};
  const std::vector<Halfspace> hs{{{1.0, 1.0}, 1.0}};
  const auto p = project(box, hs, {2.0, 2.0});
  ASSERT_TRUE(p.has_value());
  EXPECT_NEAR((*p)[0], 0.5, 1e-10);
  EXPECT_NEAR((*p)[1], 0.5, 1e-10);
  EXPECT_LE(residual(box, hs, *p), 1e-12);
  EXPECT_FALSE(project(box, {{{1.0, 1.0}, -1.0}}, {1.0, 1.0}).has_value());
}

TEST(ProjectedDescent, QuadraticWithBox) {
  const Objective f = [](const Point& x) {
    return std::pow(x[0] - 3.0, 2) + std::pow(x[1] + 1.0, 2) + std::pow(x[2] - 0.25, 2);
  };
  const Box box{{0.0, 0.0, 0.0}, {2.0, 2.0, 2.0}};
  const auto r = projected_descent(f, box, {}, {1.0, 1.0, 1.0});
  ASSERT_TRUE(r.ok());
  EXPECT_NEAR(r->point[0], 2.0, 1e-8);
  EXPECT_NEAR(r->point[1], 0.0, 1e-8);
  EXPECT_NEAR(r->point[2], 0.25, 1e-8);
  EXPECT_FALSE(r->max_iterations_reached);
}

TEST(ProjectedDescent, QuadraticOnAFace) {
  const Objective f = [](const Point& x) {
    return std::pow(x[0] - 1.0, 2) + std::pow(x[1] - 1.0, 2);
  };
  const Box box{{0.0, 0.0}, {2.0, 2.0}};
  const auto r = projected_descent(f, box, {{{1.0, 1.0}, 1.0}}, {0.1, 0.1});
  ASSERT_TRUE(r.ok());
  EXPECT_NEAR(r->point[0], 0.5, 1e-8);
  EXPECT_NEAR(r->point[1], 0.5, 1e-8);
}

TEST(ProjectedDescent, IterationCapIsAFlagNotAFailure) {
  const Objective f = [](const Point& x) { return std::pow(x[0] - 1.0, 2) + 1e4 * std::pow(x[1], 2); };
  DescentOptions options;
  options.max_iterations = 3;
  const auto r = projected_descent(f, {{-5.0, -5.0}, {5.0, 5.0}}, {}, {-4.0, 3.0}, options);
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(r->max_iterations_reached);
  EXPECT_LT(r->value, f({-4.0, 3.0}));
}

TEST(Gradients, CentralAgreesWithForwardOnSchemeObjective) {
  testing::InstanceGenerator gen(62);
  for (int inst = 0; inst < 5; ++inst) {
    Scenario s = gen.busy(1, 1);
    const SchemeProblem p = scheme_problem(SchemeId::kS1, {1, 1, 1}, s);
    for (int k = 0; k < 10; ++k) {
      Point x(p.names.size());
      for (size_t i = 0; i < x.size(); ++i) {
        x[i] = gen.uniform(0.2, 0.8) * p.box.hi[i];
      }
      const Point c = central_gradient(p.energy, x);
      const Point f = forward_gradient(p.energy, x);
      for (size_t i = 0; i < x.size(); ++i) {
        EXPECT_NEAR(f[i], c[i], 1e-5 * std::fabs(c[i])) << p.names[i];
      }
    }
  }
}

TEST(ProjectedDescent, StaysFeasibleOnSchemeProblems) {
  testing::InstanceGenerator gen(63);
  for (int inst = 0; inst < 5; ++inst) {
    Scenario s = gen.busy(1, 1);
    for (SchemeId sc : {SchemeId::kS1, SchemeId::kS2, SchemeId::kS3}) {
      const SchemeProblem p = scheme_problem(sc, {1, 2, 1}, s);
      const auto r = projected_descent(p.energy, p.box, p.constraints, box_center(p.box));
      if (!r.ok()) continue;
      EXPECT_LE(residual(p.box, p.constraints, r->point), 1e-9) << scheme_name(sc);
    }
  }
}

TEST(ProjectedDescent, AgreesWithGridOnSecondScheme) {
  testing::InstanceGenerator gen(64);
  int compared = 0;
  for (int inst = 0; inst < 3; ++inst) {
    Scenario s = gen.busy(1, 1);
    const Case2Indices idx{1, 2, 1};
    const auto grid = scheme_reference(SchemeId::kS2, idx, s);
    const SchemeProblem p = scheme_problem(SchemeId::kS2, idx, s);
    const auto r = projected_descent(p.energy, p.box, p.constraints, box_center(p.box));
    ASSERT_EQ(grid.ok(), r.ok());
    if (!grid.ok()) continue;
    ++compared;
    EXPECT_GE(r->value, grid->energy - 1e-9);
    EXPECT_LE(r->value, grid->energy * 1.005);
  }
  EXPECT_GT(compared, 0);
}

TEST(Case1Reference, MatchesClosedFormAllLocal) {
  Scenario s;
  s.device_chain = TaskChain({{5e4, 2e7}, {6e4, 3e7}});
  s.channel = {1e6, 1e-7, 1e-7, 1e-9};
  s.compute = {1e-27, 1e-27, 1e9, 2e9, 1e10};
  s.deadlines.t_s = 0.1;
  const auto r = case1_reference({3, 3}, s);
  ASSERT_TRUE(r.ok()) << r.reason();
  const double expected = 1e-27 * std::pow(5e7, 3) / (0.1 * 0.1);
  EXPECT_NEAR(r->energy, expected, 0.005 * expected);
  ASSERT_EQ(r->frequencies.size(), 2u);
  EXPECT_NEAR(r->frequencies[0], r->frequencies[1], 0.01 * r->frequencies[1]);
}

}  // namespace
}  // namespace relaymec::oracle
