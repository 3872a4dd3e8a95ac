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

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace relaymec {

// Outcome of a solve: either a value or the reason no feasible point exists.
// Infeasibility is data; malformed input is reported by exceptions instead.
template <typename T>
class SolveResult {
 public:
  static SolveResult feasible(T value) {
    SolveResult r;
    r.value_ = std::move(value);
    return r;
  }
  static SolveResult infeasible(std::string reason) {
    SolveResult r;
    r.reason_ = std::move(reason);
    return r;
  }

  bool ok() const { return value_.has_value(); }
  explicit operator bool() const { return ok(); }

  const T& value() const {
    if (!value_) throw std::logic_error("infeasible: " + reason_);
    return *value_;
  }
  T& value() {
    if (!value_) throw std::logic_error("infeasible: " + reason_);
    return *value_;
  }
  const T* operator->() const { return &value(); }
  const std::string& reason() const { return reason_; }

 private:
  SolveResult() = default;
  std::optional<T> value_;
  std::string reason_;
};

}  // namespace relaymec
