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

#include "relaymec/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace relaymec {

namespace {

// Largest argument for which std::exp stays finite in double precision.
constexpr double kMaxExponent = 709.78;

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

const Task TaskChain::kExitTask{};

const Task& TaskChain::at(int index) const {
  if (index < 1 || index > size() + 1) {
    throw std::out_of_range("task index " + std::to_string(index) +
                            " outside [1, " + std::to_string(size() + 1) + "]");
  }
  return index == size() + 1 ? kExitTask
                             : tasks_[static_cast<size_t>(index - 1)];
}

double TaskChain::cycles_in(int first, int last) const {
  double total = 0.0;
  for (int n = std::max(first, 1); n < last && n <= size(); ++n) {
    total += tasks_[static_cast<size_t>(n - 1)].cycles;
  }
  return total;
}

double transmission_energy(double data_nats, double tau, double gain,
                           const ChannelParams& channel) {
  if (!(gain > 0.0)) throw ModelDomainError("channel gain must be positive");
  if (data_nats == 0.0) {
    if (tau < 0.0) throw ModelDomainError("transmission duration is negative");
    return 0.0;
  }
  if (!(tau > 0.0)) {
    throw ModelDomainError(
        "transmission duration must be positive for nonzero data");
  }
  const double exponent = data_nats / (tau * channel.bandwidth);
  if (!(exponent <= kMaxExponent)) {
    throw ModelDomainError("duration infeasibly small");
  }
  return channel.noise * tau / gain * std::expm1(exponent);
}

double compute_energy(double cycles, double frequency, double kappa) {
  if (cycles == 0.0) return 0.0;
  if (!(frequency > 0.0)) {
    throw ModelDomainError("frequency must be positive for nonzero work");
  }
  return kappa * cycles * frequency * frequency;
}

double compute_time(double cycles, double frequency) {
  if (cycles == 0.0) return 0.0;
  if (!(frequency > 0.0)) {
    throw ModelDomainError("frequency must be positive for nonzero work");
  }
  return cycles / frequency;
}

double transmission_slope_kernel(double s) {
  if (s < 0.1) {
    // sum_{k>=2} (k-1) s^k / k!
    double term = s;  // s^k / k! at k = 1
    double sum = 0.0;
    for (int k = 2; k < 24; ++k) {
      term *= s / k;
      sum += (k - 1) * term;
    }
    return sum;
  }
  return s * std::exp(s) - std::expm1(s);
}

std::vector<Violation> validate_scenario(const Scenario& scenario) {
  std::vector<Violation> out;
  auto error = [&out](std::string field, std::string message) {
    out.push_back({Severity::kError, std::move(field), std::move(message)});
  };
  auto warning = [&out](std::string field, std::string message) {
    out.push_back({Severity::kWarning, std::move(field), std::move(message)});
  };

  auto check_chain = [&](const TaskChain& chain, const std::string& name) {
    if (chain.empty()) error(name, name + " must contain at least one task");
    for (int n = 1; n <= chain.size(); ++n) {
      const Task& t = chain.at(n);
      const std::string where = name + "[" + std::to_string(n - 1) + "]";
      if (!std::isfinite(t.data_nats) || t.data_nats < 0.0) {
        error(where + ".d_nats", "task data size must be finite and >= 0");
      }
      if (!std::isfinite(t.cycles) || t.cycles < 0.0) {
        error(where + ".cycles", "task cycle count must be finite and >= 0");
      }
      if (t.data_nats == 0.0 && t.cycles == 0.0) {
        warning(where, "task has zero data and zero cycles (exit-like task)");
      }
    }
  };
  check_chain(scenario.device_chain, "device_tasks");
  if (scenario.relay_chain) check_chain(*scenario.relay_chain, "relay_tasks");

  const ChannelParams& ch = scenario.channel;
  if (!positive_finite(ch.bandwidth)) error("channel.B", "bandwidth must be positive");
  if (!positive_finite(ch.gain_md_relay)) error("channel.h", "gain h must be positive");
  if (!positive_finite(ch.gain_relay_bs)) error("channel.g", "gain g must be positive");
  if (!positive_finite(ch.noise)) error("channel.sigma2", "noise must be positive");

  const ComputeParams& cp = scenario.compute;
  if (!positive_finite(cp.kappa_md)) error("compute.kappa_md", "kappa_md must be positive");
  if (!positive_finite(cp.kappa_relay)) error("compute.kappa_relay", "kappa_relay must be positive");
  if (!positive_finite(cp.f_md_max)) error("compute.f_md_max", "f_md_max must be positive");
  if (!positive_finite(cp.f_relay_max)) error("compute.f_relay_max", "f_relay_max must be positive");
  if (!positive_finite(cp.f_bs_max)) error("compute.f_bs_max", "f_bs_max must be positive");

  const Deadlines& dl = scenario.deadlines;
  std::optional<double> device_deadline;
  if (!scenario.relay_busy()) {
    if (!dl.t_s) {
      error("deadlines.t_s", "t_s is required when the relay has no tasks");
    } else if (!positive_finite(*dl.t_s)) {
      error("deadlines.t_s", "t_s must be positive");
    } else {
      device_deadline = dl.t_s;
    }
  } else {
    bool ok = true;
    if (!dl.t_s_th || !positive_finite(*dl.t_s_th)) {
      error("deadlines.t_s_th", "t_s_th must be present and positive");
      ok = false;
    }
    if (!dl.t_r_th || !positive_finite(*dl.t_r_th)) {
      error("deadlines.t_r_th", "t_r_th must be present and positive");
      ok = false;
    }
    if (!dl.t0 || !std::isfinite(*dl.t0) || *dl.t0 < 0.0) {
      error("deadlines.t0", "t0 must be present and >= 0");
      ok = false;
    }
    if (ok) {
      if (*dl.t_s_th > *dl.t_r_th) {
        error("deadlines", "deadline ordering: t_s_th must not exceed t_r_th");
      }
      if (*dl.t0 >= *dl.t_r_th) {
        error("deadlines", "deadline ordering: t0 must precede t_r_th");
      }
      device_deadline = dl.t_s_th;
    }
  }

  // Screen: every cycle run at the fastest available site with free
  // transmissions is a hard lower bound on completion time.
  if (device_deadline && cp.f_md_max > 0 && cp.f_relay_max > 0 &&
      cp.f_bs_max > 0) {
    const double fastest =
        std::max({cp.f_md_max, cp.f_relay_max, cp.f_bs_max});
    const double total =
        scenario.device_chain.cycles_in(1, scenario.device_chain.size() + 1);
    if (total / fastest > *device_deadline) {
      std::ostringstream msg;
      msg << "device work needs at least " << total / fastest
          << " s even at the fastest site; deadline is " << *device_deadline
          << " s";
      warning("deadlines", msg.str());
    }
  }
  return out;
}

bool has_errors(const std::vector<Violation>& violations) {
  return std::any_of(violations.begin(), violations.end(), [](const auto& v) {
    return v.severity == Severity::kError;
  });
}

}  // namespace relaymec
