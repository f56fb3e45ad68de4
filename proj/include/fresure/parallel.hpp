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

#pragma once

#include <cstddef>
#include <functional>

namespace fresure {

/// Worker count: hardware concurrency, capped by FRESURE_THREADS when set.
std::size_t default_worker_count();

/// Runs task(i) for i in [0, n_tasks) on up to `workers` threads (0 = default).
/// Task-to-thread assignment is dynamic, so tasks must write only to their own
/// output slots. The first exception thrown by a task is rethrown here.
void parallel_for(std::size_t n_tasks, const std::function<void(std::size_t)>& task,
                  std::size_t workers = 0);

}  // namespace fresure
