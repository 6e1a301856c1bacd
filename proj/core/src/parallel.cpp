// Copyright 2026 the xden developers
// SPDX-License-Identifier: Apache-2.0

#include "xden/parallel.hpp"

#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace xden {
namespace {

int env_default_threads() {
  if (const char* env = std::getenv("XDEN_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 4096) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

int g_max_threads = 0;  // 0 means "use env_default_threads()"

// Simple pool: one generation counter per batch, workers steal chunk indices
// from a shared atomic cursor. Threads are created lazily and resized when
// the requested worker count changes.
class Pool {
 public:
  ~Pool() { stop(); }

  void run(int workers, std::size_t chunk_count, const std::function<void(std::size_t)>& fn) {
    std::unique_lock lk(mu_);
    resize_locked(workers - 1);
    fn_ = &fn;
    cursor_.store(0, std::memory_order_relaxed);
    limit_ = chunk_count;
    pending_ = static_cast<int>(threads_.size());
    ++generation_;
    cv_.notify_all();
    lk.unlock();

    work();

    lk.lock();
    done_cv_.wait(lk, [&] { return pending_ == 0; });
    fn_ = nullptr;
    if (first_error_) {
      auto e = first_error_;
      first_error_ = nullptr;
      lk.unlock();
      std::rethrow_exception(e);
    }
  }

 private:
  void work() {
    for (;;) {
      const std::size_t c = cursor_.fetch_add(1, std::memory_order_relaxed);
      if (c >= limit_) break;
      try {
        (*fn_)(c);
      } catch (...) {
        std::scoped_lock lk(mu_);
        if (!first_error_) first_error_ = std::current_exception();
      }
    }
  }

  void worker_loop() {
    std::uint64_t seen = 0;
    for (;;) {
      std::unique_lock lk(mu_);
      cv_.wait(lk, [&] { return stopping_ || generation_ != seen; });
      if (stopping_) return;
      seen = generation_;
      lk.unlock();
      work();
      lk.lock();
      if (--pending_ == 0) done_cv_.notify_all();
    }
  }

  void resize_locked(int helpers) {
    if (static_cast<int>(threads_.size()) == helpers) return;
    stop_locked();
    stopping_ = false;
    threads_.reserve(static_cast<std::size_t>(helpers));
    for (int i = 0; i < helpers; ++i) threads_.emplace_back([this] { worker_loop(); });
  }

  void stop() {
    std::unique_lock lk(mu_);
    stop_locked();
  }

  void stop_locked() {
    stopping_ = true;
    cv_.notify_all();
    auto threads = std::move(threads_);
    threads_.clear();
    mu_.unlock();
    for (auto& t : threads) t.join();
    mu_.lock();
  }

  std::mutex mu_;
  std::condition_variable cv_;
  std::condition_variable done_cv_;
  std::vector<std::thread> threads_;
  const std::function<void(std::size_t)>* fn_ = nullptr;
  std::atomic<std::size_t> cursor_{0};
  std::size_t limit_ = 0;
  std::uint64_t generation_ = 0;
  int pending_ = 0;
  bool stopping_ = false;
  std::exception_ptr first_error_;
};

Pool& pool() {
  static Pool p;
  return p;
}

}  // namespace

void set_max_threads(int n) {
  if (n < 0) throw std::invalid_argument("set_max_threads: negative worker count");
  g_max_threads = n;
}

int max_threads() { return g_max_threads > 0 ? g_max_threads : env_default_threads(); }

void parallel_chunks(std::size_t chunk_count, const std::function<void(std::size_t)>& fn) {
  if (chunk_count == 0) return;
  const int workers = max_threads();
  if (workers <= 1 || chunk_count == 1) {
    for (std::size_t c = 0; c < chunk_count; ++c) fn(c);
    return;
  }
  pool().run(workers, chunk_count, fn);
}

}  // namespace xden
