// Copyright 2026 The rivuq Authors.
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

#ifndef RIVUQ_PARALLEL_HPP_
#define RIVUQ_PARALLEL_HPP_

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rivuq {

/// Runs body(k) for k in [0, n) on `workers` threads. Each index is handled
/// exactly once; callers write results into per-index slots, so the outcome
/// does not depend on scheduling. The first exception thrown by any body is
/// rethrown on the calling thread after all workers have joined.
template <typename Index, typename Body>
void parallel_for(Index n, int workers, Body&& body) {
  if (n <= 0) return;
  const int threads = std::max(1, std::min<int>(workers, static_cast<int>(n)));
  if (threads == 1) {
    for (Index k = 0; k < n; ++k) body(k);
    return;
  }
  std::atomic<Index> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) return;
      const Index k = next.fetch_add(1);
      if (k >= n) return;
      try {
        body(k);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  pool.clear();
  if (error) std::rethrow_exception(error);
}

}  // namespace rivuq

#endif  // RIVUQ_PARALLEL_HPP_
