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

#include <cstddef>
#include <exception>
#include <mutex>

namespace relaymec {

enum class ExecutionMode { kSerial, kParallel };

// Runs fn(i) for i in [0, n). In parallel mode iterations are spread over
// OpenMP threads; callers write results into per-index slots and reduce
// serially afterwards so output never depends on the thread count. The
// first exception thrown by any iteration is rethrown on the caller.
template <typename Fn>
void parallel_for(std::size_t n, ExecutionMode mode, Fn&& fn) {
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic) if (mode == ExecutionMode::kParallel)
  for (long i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace relaymec
