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

// Domain types and the physical model: Shannon-limited transmission energy
// and DVFS computation energy/time for the device -> relay -> base station
// pipeline.

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace relaymec {

// Thrown when a physical-model formula is evaluated outside its domain.
class ModelDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct Task {
  double data_nats = 0.0;  // input size, nats
  double cycles = 0.0;     // CPU cycles to finish
};

// Ordered sequential tasks. Indices are 1-based; index size()+1 is the
// implicit exit task (0 data, 0 cycles) and is never stored.
class TaskChain {
 public:
  TaskChain() = default;
  explicit TaskChain(std::vector<Task> tasks) : tasks_(std::move(tasks)) {}

  int size() const { return static_cast<int>(tasks_.size()); }
  bool empty() const { return tasks_.empty(); }

  // 1 <= index <= size()+1.
  const Task& at(int index) const;
  double data(int index) const { return at(index).data_nats; }
  double cycles(int index) const { return at(index).cycles; }

  // Sum of cycles over the half-open index range [first, last).
  double cycles_in(int first, int last) const;

  const std::vector<Task>& tasks() const { return tasks_; }

 private:
  std::vector<Task> tasks_;
  static const Task kExitTask;
};

struct ChannelParams {
  double bandwidth = 0.0;      // B, nats/s per unit of ln(1+snr)
  double gain_md_relay = 0.0;  // h
  double gain_relay_bs = 0.0;  // g
  double noise = 0.0;          // sigma^2
};

struct ComputeParams {
  double kappa_md = 0.0;
  double kappa_relay = 0.0;
  double f_md_max = 0.0;
  double f_relay_max = 0.0;
  double f_bs_max = 0.0;
};

struct Deadlines {
  std::optional<double> t_s;     // device deadline when the relay is idle
  std::optional<double> t0;      // relay task arrival instant
  std::optional<double> t_s_th;  // device deadline when the relay is busy
  std::optional<double> t_r_th;  // relay deadline
};

struct Scenario {
  TaskChain device_chain;
  std::optional<TaskChain> relay_chain;  // absent: relay has no own tasks
  ChannelParams channel;
  ComputeParams compute;
  Deadlines deadlines;

  bool relay_busy() const { return relay_chain.has_value(); }
};

// Energy to push `data_nats` through a link of power gain `gain` in `tau`
// seconds: (sigma^2 tau / gain) (e^{d/(tau B)} - 1). Zero data costs nothing
// for any tau >= 0.
double transmission_energy(double data_nats, double tau, double gain,
                           const ChannelParams& channel);

double compute_energy(double cycles, double frequency, double kappa);
double compute_time(double cycles, double frequency);

// s e^s - (e^s - 1), evaluated without cancellation for small s. This is
// -(gain/sigma^2) dE/dtau at s = d/(tau B), and it is strictly positive for
// s > 0.
double transmission_slope_kernel(double s);

enum class Severity { kError, kWarning };

struct Violation {
  Severity severity = Severity::kError;
  std::string field;
  std::string message;
};

// Checks every type invariant plus a cheap lower-bound feasibility screen.
// Never throws; an empty result means the scenario is well formed.
std::vector<Violation> validate_scenario(const Scenario& scenario);

bool has_errors(const std::vector<Violation>& violations);

}  // namespace relaymec
