#pragma once

#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace sbopt {

// Fork/join pool with a fixed partition: [0, n) is split into workers()
// contiguous chunks that depend only on (n, workers). Callers must keep all
// per-index work independent; under that contract results are identical for
// any worker count. The calling thread executes chunk 0 itself, so a pool
// with workers() == 1 spawns no threads at all. Not reentrant.
class ThreadPool {
 public:
  explicit ThreadPool(unsigned workers = 0);  // 0 = hardware concurrency
  ~ThreadPool();

  ThreadPool(const ThreadPool&) = delete;
  ThreadPool& operator=(const ThreadPool&) = delete;

  unsigned workers() const noexcept { return workers_; }

  // Runs fn(begin, end) on every chunk of [0, n); blocks until all finish.
  void for_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

  // fn(i) for every i in [0, n).
  void for_each_index(std::size_t n, const std::function<void(std::size_t)>& fn);

  // Chunk c of k over [0, n), balanced to within one element.
  static std::pair<std::size_t, std::size_t> chunk_bounds(std::size_t n, unsigned k, unsigned c);

 private:
  void worker_loop(unsigned id);

  unsigned workers_;
  std::vector<std::thread> threads_;
  std::mutex mu_;
  std::condition_variable start_cv_;
  std::condition_variable done_cv_;
  const std::function<void(std::size_t, std::size_t)>* job_ = nullptr;
  std::size_t job_n_ = 0;
  std::uint64_t generation_ = 0;
  unsigned pending_ = 0;
  bool stop_ = false;
};

// Requested worker count, resolving 0 to the hardware concurrency (min 1).
unsigned effective_workers(unsigned requested) noexcept;

}  // namespace sbopt
