// Copyright 2026 The modone Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace modone {

// Worker cap; 0 means all hardware threads.
inline int& thread_limit() {
  static int limit = 0;
  return limit;
}

inline int worker_count(int64_t tasks) {
  int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  int cap = thread_limit() > 0 ? thread_limit() : hw;
  return static_cast<int>(std::max<int64_t>(1, std::min<int64_t>(cap, tasks)));
}

// out[i] = fn(i) for i in [0, n). Results land in index order, so any
// reduction over `out` is independent of scheduling.
template <class T, class F>
std::vector<T> parallel_map(int64_t n, F&& fn) {
  std::vector<T> out(static_cast<size_t>(std::max<int64_t>(n, 0)));
  if (n <= 0) return out;
  const int workers = worker_count(n);
  if (workers == 1) {
    for (int64_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<int64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto run = [&]() {
    for (;;) {
      int64_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        out[i] = fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

// Left-to-right sum, the fixed reduction order.
template <class T>
T ordered_sum(const std::vector<T>& v) {
  T s{};
  for (const T& x : v) s += x;
  return s;
}

}  // namespace modone
