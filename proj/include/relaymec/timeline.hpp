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

// Physical schedule implied by a solution: one event per compute block and
// upload, checked against the sequencing rules of the system model.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "relaymec/case1_solver.hpp"
#include "relaymec/case2_solver.hpp"
#include "relaymec/model.hpp"

namespace relaymec {

enum class Node { kDevice, kRelay, kBs };

enum class EventKind {
  kComputeDevice,  // device tasks, on whichever node runs them
  kComputeRelayOwn,
  kTxDeviceToRelay,
  kTxRelayToBsDeviceTask,
  kTxRelayToBsRelayTask,
  kComputeAtBsDeviceTask,
  kComputeAtBsRelayTask,
};

const char* node_name(Node node);
const char* event_kind_name(EventKind kind);

struct Event {
  Node node = Node::kDevice;
  EventKind kind = EventKind::kComputeDevice;
  double start = 0.0;
  double end = 0.0;
};

struct Timeline {
  std::vector<Event> events;  // sorted by start time, stable
  double device_deadline = 0.0;
  bool has_relay_chain = false;
  double relay_deadline = 0.0;  // meaningful when has_relay_chain
  bool device_deadline_met = true;
  bool relay_deadline_met = true;
};

class InconsistentSolution : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Throws InconsistentSolution when a chain finishes more than 1e-9 s
// (relative to the deadline, at least absolute) after its deadline.
Timeline build_timeline(const Case1Solution& solution, const Scenario& s);
Timeline build_timeline(const Case2Solution& solution, const Scenario& s);

struct TimelineViolation {
  std::string rule;  // "band conflict", "relay priority", "BS priority", ...
  std::string detail;
};

std::vector<TimelineViolation> verify(const Timeline& timeline);

// node,kind,start_s,end_s with 12 significant digits.
std::string gantt_csv(const Timeline& timeline);

}  // namespace relaymec
