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

#include "relaymec/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace relaymec {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw InputError(where + ": " + what);
}

void reject_unknown(const Json& obj, const std::string& where,
                    std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(where, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known |= key == a;
    if (!known) fail(where, "unknown key '" + key + "'");
  }
}

double number(const Json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing key '") + key + "'");
  if (!it->is_number()) fail(where + "." + key, "expected a number");
  return it->get<double>();
}

std::optional<double> optional_number(const Json& obj, const char* key,
                                      const std::string& where) {
  if (!obj.contains(key)) return std::nullopt;
  return number(obj, key, where);
}

TaskChain parse_chain(const Json& arr, const std::string& where) {
  if (!arr.is_array()) fail(where, "expected an array of tasks");
  std::vector<Task> tasks;
  for (size_t i = 0; i < arr.size(); ++i) {
    const std::string at = where + "[" + std::to_string(i) + "]";
    reject_unknown(arr[i], at, {"d_nats", "cycles"});
    tasks.push_back({number(arr[i], "d_nats", at), number(arr[i], "cycles", at)});
  }
  return TaskChain(std::move(tasks));
}

Json chain_json(const TaskChain& chain) {
  Json arr = Json::array();
  for (const Task& t : chain.tasks()) {
    arr.push_back({{"d_nats", t.data_nats}, {"cycles", t.cycles}});
  }
  return arr;
}

const Json& member(const Json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing key '") + key + "'");
  return *it;
}

double get(const Json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_number()) {
    throw InputError(std::string("solution: missing number '") + key + "'");
  }
  return it->get<double>();
}

Json energy_json(double total, const Json& breakdown, const Scenario& s) {
  Json e;
  e["total_j"] = round12(total);
  e["normalized"] = round12(total / (s.channel.noise / s.channel.gain_relay_bs));
  e["breakdown"] = breakdown;
  return e;
}

double ratio(double cycles, double duration) {
  return cycles == 0.0 ? 0.0 : cycles / duration;
}

}  // namespace

Scenario parse_scenario(std::string_view text, std::string_view source) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    size_t line = 1;
    size_t column = 1;
    const size_t upto = std::min<size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (size_t i = 0; i < upto; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::ostringstream msg;
    msg << source << ": malformed JSON at line " << line << ", column "
        << column << ": " << e.what();
    throw InputError(msg.str());
  }
  reject_unknown(doc, "scenario",
                 {"device_tasks", "relay_tasks", "channel", "compute", "deadlines"});
  Scenario s;
  s.device_chain = parse_chain(member(doc, "device_tasks", "scenario"), "device_tasks");
  if (doc.contains("relay_tasks")) {
    s.relay_chain = parse_chain(doc["relay_tasks"], "relay_tasks");
  }
  const Json& ch = member(doc, "channel", "scenario");
  reject_unknown(ch, "channel", {"B", "h", "g", "sigma2"});
  s.channel = {number(ch, "B", "channel"), number(ch, "h", "channel"),
               number(ch, "g", "channel"), number(ch, "sigma2", "channel")};
  const Json& c = member(doc, "compute", "scenario");
  reject_unknown(c, "compute",
                 {"kappa_md", "kappa_relay", "f_md_max", "f_relay_max", "f_bs_max"});
  s.compute = {number(c, "kappa_md", "compute"), number(c, "kappa_relay", "compute"),
               number(c, "f_md_max", "compute"), number(c, "f_relay_max", "compute"),
               number(c, "f_bs_max", "compute")};
  const Json& d = member(doc, "deadlines", "scenario");
  reject_unknown(d, "deadlines", {"t_s", "t0", "t_s_th", "t_r_th"});
  s.deadlines = {optional_number(d, "t_s", "deadlines"),
                 optional_number(d, "t0", "deadlines"),
                 optional_number(d, "t_s_th", "deadlines"),
                 optional_number(d, "t_r_th", "deadlines")};
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

Json scenario_to_json(const Scenario& s) {
  Json doc;
  doc["device_tasks"] = chain_json(s.device_chain);
  if (s.relay_chain) doc["relay_tasks"] = chain_json(*s.relay_chain);
  doc["channel"] = {{"B", s.channel.bandwidth},
                    {"h", s.channel.gain_md_relay},
                    {"g", s.channel.gain_relay_bs},
                    {"sigma2", s.channel.noise}};
  doc["compute"] = {{"kappa_md", s.compute.kappa_md},
                    {"kappa_relay", s.compute.kappa_relay},
                    {"f_md_max", s.compute.f_md_max},
                    {"f_relay_max", s.compute.f_relay_max},
                    {"f_bs_max", s.compute.f_bs_max}};
  Json d = Json::object();
  if (s.deadlines.t_s) d["t_s"] = *s.deadlines.t_s;
  if (s.deadlines.t0) d["t0"] = *s.deadlines.t0;
  if (s.deadlines.t_s_th) d["t_s_th"] = *s.deadlines.t_s_th;
  if (s.deadlines.t_r_th) d["t_r_th"] = *s.deadlines.t_r_th;
  doc["deadlines"] = d;
  return doc;
}

void set_scenario_field(Scenario& s, const std::string& field, double value) {
  if (field == "t_s") {
    s.deadlines.t_s = value;
  } else if (field == "t0") {
    s.deadlines.t0 = value;
  } else if (field == "t_s_th") {
    s.deadlines.t_s_th = value;
  } else if (field == "t_r_th") {
    s.deadlines.t_r_th = value;
  } else if (field == "B") {
    s.channel.bandwidth = value;
  } else if (field == "h") {
    s.channel.gain_md_relay = value;
  } else if (field == "g") {
    s.channel.gain_relay_bs = value;
  } else if (field == "sigma2") {
    s.channel.noise = value;
  } else if (field == "kappa_md") {
    s.compute.kappa_md = value;
  } else if (field == "kappa_relay") {
    s.compute.kappa_relay = value;
  } else if (field == "f_md_max") {
    s.compute.f_md_max = value;
  } else if (field == "f_relay_max") {
    s.compute.f_relay_max = value;
  } else if (field == "f_bs_max") {
    s.compute.f_bs_max = value;
  } else {
    throw InputError("unknown sweep field '" + field + "'");
  }
}

double round12(double v) {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

Json solution_to_json(const Case1Solution& sol, const Scenario& s) {
  const TaskChain& chain = s.device_chain;
  const Case1LowerSolution& x = sol.lower;
  const SplitIndices sp = sol.split;
  auto duration = [](double cycles, double f) {
    return cycles == 0.0 ? 0.0 : cycles / f;
  };
  Json doc;
  doc["case"] = "idle-relay";
  doc["indices"] = {{"n1", sp.n1}, {"n2", sp.n2}};
  doc["times"] = {
      {"tau1", round12(x.tau1)},
      {"tau2", round12(x.tau2)},
      {"local", round12(duration(chain.cycles_in(1, sp.n1), x.f_local))},
      {"relay", round12(duration(chain.cycles_in(sp.n1, sp.n2), x.f_relay))},
      {"bs", round12(duration(chain.cycles_in(sp.n2, chain.size() + 1), x.f_bs))},
      {"slack", round12(x.slack)}};
  doc["frequencies"] = {{"f_local", round12(x.f_local)},
                        {"f_relay", round12(x.f_relay)},
                        {"f_bs", round12(x.f_bs)}};
  doc["duals"] = {{"lambda", round12(x.lambda)}};
  const Case1EnergyBreakdown& e = sol.energy_breakdown;
  doc["energy"] = energy_json(x.energy,
                              {{"tx_md", round12(e.tx_md)},
                               {"tx_relay", round12(e.tx_relay)},
                               {"cpu_md", round12(e.cpu_md)},
                               {"cpu_relay", round12(e.cpu_relay)}},
                              s);
  return doc;
}

Json solution_to_json(const Case2Solution& sol, const Scenario& s) {
  const Case2LowerSolution& x = sol.lower;
  const Case2Blocks b = case2_blocks(sol.indices, s);
  Json doc;
  doc["case"] = "busy-relay";
  doc["scheme"] = scheme_name(sol.scheme);
  doc["indices"] = {{"n1", sol.indices.n1},
                    {"n2", sol.indices.n2},
                    {"m1", sol.indices.m1}};
  doc["times"] = {{"tau1", round12(x.tau1)}, {"tau2", round12(x.tau2)},
                  {"tau3", round12(x.tau3)}, {"T1", round12(x.T1)},
                  {"T2", round12(x.T2)},     {"T3", round12(x.T3)},
                  {"tau_s", round12(x.tau_s)}, {"tau0", round12(x.tau0)},
                  {"t_c", round12(x.t_c)}};
  doc["frequencies"] = {{"f_local", round12(ratio(b.l_local, x.T1))},
                        {"f_relay_device", round12(ratio(b.l_relay, x.T2))},
                        {"f_relay_own", round12(ratio(b.l_own, x.T3))},
                        {"f_bs", round12(s.compute.f_bs_max)}};
  doc["duals"] = {{"psi", round12(x.psi)},
                  {"lambda", round12(x.lambda)},
                  {"lambda2", round12(x.lambda2)},
                  {"eta1", round12(x.eta1)},
                  {"eta2", round12(x.eta2)}};
  doc["path"] = x.path;
  doc["cap_violations"] = sol.cap_violations;
  const Case2EnergyBreakdown& e = sol.energy_breakdown;
  doc["energy"] = energy_json(x.energy,
                              {{"tx_md", round12(e.tx_md)},
                               {"tx_relay_device", round12(e.tx_relay_device)},
                               {"tx_relay_own", round12(e.tx_relay_own)},
                               {"cpu_md", round12(e.cpu_md)},
                               {"cpu_relay_device", round12(e.cpu_relay_device)},
                               {"cpu_relay_own", round12(e.cpu_relay_own)}},
                              s);
  return doc;
}

SolutionDocument parse_solution(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
    const std::string kind = doc.at("case").get<std::string>();
    const Json& idx = doc.at("indices");
    const Json& t = doc.at("times");
    const Json& f = doc.at("frequencies");
    const Json& d = doc.at("duals");
    const Json& e = doc.at("energy");
    const Json& br = e.at("breakdown");
    if (kind == "idle-relay") {
      Case1Solution sol;
      sol.split = {idx.at("n1").get<int>(), idx.at("n2").get<int>()};
      sol.lower.tau1 = get(t, "tau1");
      sol.lower.tau2 = get(t, "tau2");
      sol.lower.slack = get(t, "slack");
      sol.lower.f_local = get(f, "f_local");
      sol.lower.f_relay = get(f, "f_relay");
      sol.lower.f_bs = get(f, "f_bs");
      sol.lower.lambda = get(d, "lambda");
      sol.lower.energy = get(e, "total_j");
      sol.energy_breakdown = {get(br, "tx_md"), get(br, "tx_relay"),
                              get(br, "cpu_md"), get(br, "cpu_relay")};
      return sol;
    }
    if (kind == "busy-relay") {
      Case2Solution sol;
      const std::string scheme = doc.at("scheme").get<std::string>();
      if (scheme == "S1") {
        sol.scheme = SchemeId::kS1;
      } else if (scheme == "S2") {
        sol.scheme = SchemeId::kS2;
      } else if (scheme == "S3") {
        sol.scheme = SchemeId::kS3;
      } else {
        throw InputError("solution: unknown scheme '" + scheme + "'");
      }
      sol.indices = {idx.at("n1").get<int>(), idx.at("n2").get<int>(),
                     idx.at("m1").get<int>()};
      Case2LowerSolution& x = sol.lower;
      x.tau1 = get(t, "tau1");
      x.tau2 = get(t, "tau2");
      x.tau3 = get(t, "tau3");
      x.T1 = get(t, "T1");
      x.T2 = get(t, "T2");
      x.T3 = get(t, "T3");
      x.tau_s = get(t, "tau_s");
      x.tau0 = get(t, "tau0");
      x.t_c = get(t, "t_c");
      x.psi = get(d, "psi");
      x.lambda = get(d, "lambda");
      x.lambda2 = get(d, "lambda2");
      x.eta1 = get(d, "eta1");
      x.eta2 = get(d, "eta2");
      x.energy = get(e, "total_j");
      x.path = doc.at("path").get<std::string>();
      sol.cap_violations = doc.at("cap_violations").get<std::vector<std::string>>();
      sol.energy_breakdown = {get(br, "tx_md"),  get(br, "tx_relay_device"),
                              get(br, "tx_relay_own"), get(br, "cpu_md"),
                              get(br, "cpu_relay_device"), get(br, "cpu_relay_own")};
      return sol;
    }
    throw InputError("solution: unknown case '" + kind + "'");
  } catch (const nlohmann::json::exception& ex) {
    throw InputError(std::string("solution: ") + ex.what());
  }
}

}  // namespace relaymec
