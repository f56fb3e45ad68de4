// Copyright 2026 The fresure Authors
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

#include "fresure/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "fresure/error.hpp"

namespace fresure {

std::size_t default_worker_count() {
  std::size_t n = std::max(1U, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("FRESURE_THREADS")) {
    try {
      const long cap = std::stol(env);
      if (cap < 1) {
        throw ArgumentError("FRESURE_THREADS must be >= 1");
      }
      n = std::min(n, static_cast<std::size_t>(cap));
    } catch (const std::logic_error&) {
      throw ArgumentError(std::string("FRESURE_THREADS is not a positive integer: ") + env);
    }
  }
  return n;
}

void parallel_for(std::size_t n_tasks, const std::function<void(std::size_t)>& task,
                  std::size_t workers) {
  if (workers == 0) {
    workers = default_worker_count();
  }
  workers = std::min(workers, n_tasks);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n_tasks; ++i) {
      task(i);
    }
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    for (std::size_t i = next.fetch_add(1); i < n_tasks; i = next.fetch_add(1)) {
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) {
          error = std::current_exception();
        }
        next.store(n_tasks);
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) {
    pool.emplace_back(run);
  }
  run();
  pool.clear();
  if (error) {
    std::rethrow_exception(error);
  }
}

}  // namespace fresure
