#include "sbopt/parallel.hpp"

#include <algorithm>

namespace sbopt {

unsigned effective_workers(unsigned requested) noexcept {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

std::pair<std::size_t, std::size_t> ThreadPool::chunk_bounds(std::size_t n, unsigned k,
                                                             unsigned c) {
  const std::size_t q = n / k;
  const std::size_t r = n % k;
  const std::size_t begin = c * q + std::min<std::size_t>(c, r);
  return {begin, begin + q + (c < r ? 1 : 0)};
}

ThreadPool::ThreadPool(unsigned workers) : workers_(effective_workers(workers)) {
  threads_.reserve(workers_ - 1);
  for (unsigned id = 1; id < workers_; ++id) {
    threads_.emplace_back([this, id] { worker_loop(id); });
  }
}

ThreadPool::~ThreadPool() {
  {
    std::lock_guard lock(mu_);
    stop_ = true;
  }
  start_cv_.notify_all();
  for (auto& t : threads_) t.join();
}

void ThreadPool::worker_loop(unsigned id) {
  std::uint64_t seen = 0;
  for (;;) {
    const std::function<void(std::size_t, std::size_t)>* job = nullptr;
    std::size_t n = 0;
    {
      std::unique_lock lock(mu_);
      start_cv_.wait(lock, [&] { return stop_ || generation_ != seen; });
      if (stop_) return;
      seen = generation_;
      job = job_;
      n = job_n_;
    }
    auto [begin, end] = chunk_bounds(n, workers_, id);
    if (begin < end) (*job)(begin, end);
    {
      std::lock_guard lock(mu_);
      if (--pending_ == 0) done_cv_.notify_all();
    }
  }
}

void ThreadPool::for_chunks(std::size_t n,
                            const std::function<void(std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  if (workers_ == 1) {
    fn(0, n);
    return;
  }
  {
    std::lock_guard lock(mu_);
    job_ = &fn;
    job_n_ = n;
    pending_ = workers_ - 1;
    ++generation_;
  }
  start_cv_.notify_all();
  auto [begin, end] = chunk_bounds(n, workers_, 0);
  if (begin < end) fn(begin, end);
  std::unique_lock lock(mu_);
  done_cv_.wait(lock, [&] { return pending_ == 0; });
}

void ThreadPool::for_each_index(std::size_t n, const std::function<void(std::size_t)>& fn) {
  for_chunks(n, [&fn](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) fn(i);
  });
}

}  // namespace sbopt
