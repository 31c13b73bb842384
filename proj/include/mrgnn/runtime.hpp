// Copyright 2026 The MRGNN Authors
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

// Process-level helpers: allocator tuning and a small index-parallel loop.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace mrgnn {

/// Keeps large tape buffers on the heap instead of returning them to the OS
/// after every training step. No-op outside glibc.
void tune_allocator();

/// Worker threads for parallel_for: MRGNN_THREADS if set and positive,
/// otherwise the hardware concurrency (at least 1).
std::size_t worker_count();

/// Calls fn(i) for i in [0, n) on up to `threads` threads. Each index runs
/// exactly once, so results written to slot i are independent of scheduling.
/// If any call throws, the exception of the lowest failing index is rethrown
/// after all workers finish.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn, std::size_t threads = worker_count()) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace mrgnn
