// Copyright 2026 The meanfield Authors
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

#ifndef MEANFIELD_PARALLEL_HPP
#define MEANFIELD_PARALLEL_HPP

#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace meanfield {

/// Fork-join pool with static contiguous partitioning. Work items must write
/// disjoint outputs; any reduction is done by the caller afterwards in a
/// fixed order, so results never depend on the worker count.
class WorkerPool {
 public:
  using RangeFn = std::function<void(std::size_t begin, std::size_t end)>;

  explicit WorkerPool(unsigned threads = 1);
  ~WorkerPool();

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  [[nodiscard]] unsigned size() const { return static_cast<unsigned>(workers_.size()) + 1; }

  /// Runs fn over [0, n) split into size() chunks and waits for all of them.
  /// The first exception thrown by any chunk is rethrown here.
  void run(std::size_t n, const RangeFn& fn);

 private:
  void worker_loop(unsigned index);

  std::vector<std::thread> workers_;
  std::mutex mutex_;
  std::condition_variable start_cv_;
  std::condition_variable done_cv_;
  const RangeFn* job_ = nullptr;
  std::size_t job_n_ = 0;
  std::size_t generation_ = 0;
  unsigned pending_ = 0;
  bool stop_ = false;
  std::exception_ptr error_;
};

/// Resolves a requested thread count: 0 means "use MEANFIELD_THREADS if set,
/// else 1".
unsigned resolve_threads(unsigned requested);

}  // namespace meanfield

#endif  // MEANFIELD_PARALLEL_HPP
