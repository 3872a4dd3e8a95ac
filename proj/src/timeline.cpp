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

#include "relaymec/timeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace relaymec {

namespace {

constexpr double kTol = 1e-9;

double tolerance(double scale) { return kTol * std::max(1.0, std::fabs(scale)); }

// Runs `work` seconds from `start`, suspended while `blocked` is busy.
std::vector<std::pair<double, double>> fill_around(double start, double work,
                                                   double blocked_start,
                                                   double blocked_end) {
  std::vector<std::pair<double, double>> out;
  if (work <= 0.0) {
    if (start >= blocked_start && start < blocked_end) start = blocked_end;
    out.emplace_back(start, start);
    return out;
  }
  const bool blocks = blocked_end > blocked_start;
  if (blocks && start >= blocked_start && start < blocked_end) start = blocked_end;
  if (blocks && start < blocked_start && start + work > blocked_start) {
    const double first = blocked_start - start;
    out.emplace_back(start, blocked_start);
    out.emplace_back(blocked_end, blocked_end + work - first);
    return out;
  }
  out.emplace_back(start, start + work);
  return out;
}

void sort_events(Timeline& t) {
  std::stable_sort(t.events.begin(), t.events.end(),
                   [](const Event& a, const Event& b) { return a.start < b.start; });
}

bool is_transmission(EventKind k) {
  return k == EventKind::kTxDeviceToRelay ||
         k == EventKind::kTxRelayToBsDeviceTask ||
         k == EventKind::kTxRelayToBsRelayTask;
}

bool is_relay_chain(EventKind k) {
  return k == EventKind::kComputeRelayOwn ||
         k == EventKind::kTxRelayToBsRelayTask ||
         k == EventKind::kComputeAtBsRelayTask;
}

void check_deadlines(Timeline& t) {
  double device_end = 0.0;
  double relay_end = 0.0;
  for (const Event& e : t.events) {
    if (is_relay_chain(e.kind)) {
      relay_end = std::max(relay_end, e.end);
    } else {
      device_end = std::max(device_end, e.end);
    }
  }
  t.device_deadline_met =
      device_end <= t.device_deadline + tolerance(t.device_deadline);
  t.relay_deadline_met = !t.has_relay_chain ||
                         relay_end <= t.relay_deadline + tolerance(t.relay_deadline);
  if (!t.device_deadline_met || !t.relay_deadline_met) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "inconsistent solution: ";
    if (!t.device_deadline_met) {
      msg << "device chain ends at " << device_end << " s after its deadline "
          << t.device_deadline << " s";
    } else {
      msg << "relay chain ends at " << relay_end << " s after its deadline "
          << t.relay_deadline << " s";
    }
    throw InconsistentSolution(msg.str());
  }
}

// Device pipeline from time 0: local block, upload, relay block,
// relay upload, BS block.
void add_device_chain(Timeline& t, double local, double tau1, double relay,
                      double tau2, double bs) {
  double at = 0.0;
  auto push = [&](Node node, EventKind kind, double duration) {
    t.events.push_back({node, kind, at, at + duration});
    at += duration;
  };
  push(Node::kDevice, EventKind::kComputeDevice, local);
  push(Node::kDevice, EventKind::kTxDeviceToRelay, tau1);
  push(Node::kRelay, EventKind::kComputeDevice, relay);
  push(Node::kRelay, EventKind::kTxRelayToBsDeviceTask, tau2);
  push(Node::kBs, EventKind::kComputeAtBsDeviceTask, bs);
}

}  // namespace

const char* node_name(Node node) {
  switch (node) {
    case Node::kDevice:
      return "Device";
    case Node::kRelay:
      return "Relay";
    case Node::kBs:
      return "BS";
  }
  return "?";
}

const char* event_kind_name(EventKind kind) {
  switch (kind) {
    case EventKind::kComputeDevice:
      return "ComputeDevice";
    case EventKind::kComputeRelayOwn:
      return "ComputeRelayOwn";
    case EventKind::kTxDeviceToRelay:
      return "TxDeviceToRelay";
    case EventKind::kTxRelayToBsDeviceTask:
      return "TxRelayToBs_DeviceTask";
    case EventKind::kTxRelayToBsRelayTask:
      return "TxRelayToBs_RelayTask";
    case EventKind::kComputeAtBsDeviceTask:
      return "ComputeAtBs_DeviceTask";
    case EventKind::kComputeAtBsRelayTask:
      return "ComputeAtBs_RelayTask";
  }
  return "?";
}

Timeline build_timeline(const Case1Solution& sol, const Scenario& s) {
  if (!s.deadlines.t_s) throw std::invalid_argument("timeline needs deadlines.t_s");
  const TaskChain& chain = s.device_chain;
  const SplitIndices sp = sol.split;
  check_split(sp, chain);
  const Case1LowerSolution& x = sol.lower;
  auto duration = [](double cycles, double f) {
    return cycles == 0.0 ? 0.0 : compute_time(cycles, f);
  };
  Timeline t;
  t.device_deadline = *s.deadlines.t_s;
  add_device_chain(t, duration(chain.cycles_in(1, sp.n1), x.f_local), x.tau1,
                   duration(chain.cycles_in(sp.n1, sp.n2), x.f_relay), x.tau2,
                   duration(chain.cycles_in(sp.n2, chain.size() + 1),
                            s.compute.f_bs_max));
  sort_events(t);
  check_deadlines(t);
  return t;
}

Timeline build_timeline(const Case2Solution& sol, const Scenario& s) {
  const Case2Blocks b = case2_blocks(sol.indices, s);
  if (!s.deadlines.t0 || !s.deadlines.t_s_th || !s.deadlines.t_r_th) {
    throw std::invalid_argument("timeline needs t0, t_s_th and t_r_th");
  }
  const double t0 = *s.deadlines.t0;
  const Case2LowerSolution& x = sol.lower;
  Timeline t;
  t.device_deadline = *s.deadlines.t_s_th;
  t.has_relay_chain = true;
  t.relay_deadline = *s.deadlines.t_r_th;

  add_device_chain(t, x.T1, x.tau1, x.T2, x.tau2, x.tau_s);
  const double relay_block = x.T1 + x.tau1;
  const double device_bs = relay_block + x.T2 + x.tau2;

  double upload = t0 + x.T3;
  if (sol.scheme == SchemeId::kS2) {
    // Own work yields to the device block.
    for (const auto& [a, e] : fill_around(t0, x.T3, relay_block, relay_block + x.T2)) {
      t.events.push_back({Node::kRelay, EventKind::kComputeRelayOwn, a, e});
    }
    upload = t0 + x.T2 + x.T3;
  } else {
    t.events.push_back({Node::kRelay, EventKind::kComputeRelayOwn, t0, t0 + x.T3});
  }
  upload += x.tau0;
  t.events.push_back(
      {Node::kRelay, EventKind::kTxRelayToBsRelayTask, upload, upload + x.tau3});
  const double bs_work = b.l_bs_relay / s.compute.f_bs_max;
  for (const auto& [a, e] :
       fill_around(upload + x.tau3, bs_work, device_bs, device_bs + x.tau_s)) {
    t.events.push_back({Node::kBs, EventKind::kComputeAtBsRelayTask, a, e});
  }
  sort_events(t);
  check_deadlines(t);
  return t;
}

std::vector<TimelineViolation> verify(const Timeline& t) {
  std::vector<TimelineViolation> out;
  double scale = t.device_deadline;
  if (t.has_relay_chain) scale = std::max(scale, t.relay_deadline);
  const double tol = tolerance(scale);
  std::ostringstream detail;
  detail.precision(12);
  auto describe = [](const Event& e) {
    std::ostringstream m;
    m.precision(12);
    m << event_kind_name(e.kind) << " [" << e.start << ", " << e.end << "]";
    return m.str();
  };

  for (const Event& e : t.events) {
    if (e.start < -tol || e.end < e.start - tol) {
      out.push_back({"event bounds", describe(e)});
    }
  }
  for (size_t i = 0; i < t.events.size(); ++i) {
    const Event& a = t.events[i];
    if (!is_transmission(a.kind) || a.end - a.start <= 0.0) continue;
    for (size_t j = i + 1; j < t.events.size(); ++j) {
      const Event& b = t.events[j];
      if (!is_transmission(b.kind) || b.end - b.start <= 0.0) continue;
      const double overlap = std::min(a.end, b.end) - std::max(a.start, b.start);
      if (overlap > tol) {
        out.push_back({"band conflict", describe(a) + " overlaps " + describe(b)});
      }
    }
  }

  const Event* upload = nullptr;
  const Event* relay_block = nullptr;
  const Event* arrival = nullptr;
  const Event* device_bs = nullptr;
  for (const Event& e : t.events) {
    if (e.kind == EventKind::kTxDeviceToRelay) upload = &e;
    if (e.kind == EventKind::kComputeDevice && e.node == Node::kRelay) relay_block = &e;
    if (e.kind == EventKind::kTxRelayToBsDeviceTask) arrival = &e;
    if (e.kind == EventKind::kComputeAtBsDeviceTask) device_bs = &e;
  }
  if (upload && relay_block && std::fabs(relay_block->start - upload->end) > tol) {
    out.push_back({"relay priority", describe(*relay_block) +
                                         " does not start when " +
                                         describe(*upload) + " ends"});
  }
  if (device_bs) {
    if (arrival && std::fabs(device_bs->start - arrival->end) > tol) {
      out.push_back({"BS priority", describe(*device_bs) +
                                        " does not start when " +
                                        describe(*arrival) + " ends"});
    }
    for (const Event& e : t.events) {
      if (e.kind != EventKind::kComputeAtBsRelayTask || e.end - e.start <= 0.0) {
        continue;
      }
      const double overlap =
          std::min(e.end, device_bs->end) - std::max(e.start, device_bs->start);
      if (overlap > tol) {
        out.push_back({"BS priority", describe(e) + " runs during " + describe(*device_bs)});
      }
    }
  }
  if (!t.device_deadline_met) out.push_back({"device deadline", "missed"});
  if (!t.relay_deadline_met) out.push_back({"relay deadline", "missed"});
  return out;
}

std::string gantt_csv(const Timeline& t) {
  std::string out = "node,kind,start_s,end_s\n";
  char line[160];
  for (const Event& e : t.events) {
    std::snprintf(line, sizeof line, "%s,%s,%.12g,%.12g\n", node_name(e.node),
                  event_kind_name(e.kind), e.start, e.end);
    out += line;
  }
  return out;
}

}  // namespace relaymec
