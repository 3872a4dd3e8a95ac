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


// Serial reference against the OpenMP kernels.

#include <benchmark/benchmark.h>

#include <cmath>

#include "instances.hpp"
#include "relaymec/case1_solver.hpp"
#include "relaymec/case2_solver.hpp"
#include "relaymec/oracle.hpp"

namespace relaymec {
namespace {

ExecutionMode mode_of(const benchmark::State& state) {
  return state.range(0) == 0 ? ExecutionMode::kSerial : ExecutionMode::kParallel;
}

void label(benchmark::State& state) {
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}

void BM_SolveCase1(benchmark::State& state) {
  testing::InstanceGenerator gen(7);
  const Scenario s = gen.idle(static_cast<int>(state.range(1)));
  Case1Options o;
  o.mode = mode_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(solve_case1_exhaustive(s, o));
  label(state);
}
BENCHMARK(BM_SolveCase1)->ArgsProduct({{0, 1}, {6, 12}})->Unit(benchmark::kMillisecond);

void BM_SolveCase2(benchmark::State& state) {
  testing::InstanceGenerator gen(8);
  const Scenario s = gen.busy(2, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(state.range(0) == 0 ? solve_case2_serial(s) : solve_case2(s));
  }
  label(state);
}
BENCHMARK(BM_SolveCase2)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_GridMinimize(benchmark::State& state) {
  const oracle::Objective f = [](const oracle::Point& x) {
    double v = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      v += std::cosh(x[i] - 0.1 * static_cast<double>(i + 1));
    }
    return v;
  };
  const oracle::Predicate any = [](const oracle::Point&) { return true; };
  oracle::GridSpec spec;
  spec.axes.assign(4, oracle::Axis{-1.0, 1.0, 21});
  spec.rounds = 6;
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle::grid_minimize(f, any, spec, mode_of(state)));
  }
  label(state);
}
BENCHMARK(BM_GridMinimize)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace relaymec

BENCHMARK_MAIN();
