// Copyright 2026 The Tooka Authors
//
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace tooka {

// Runs fn(i) for i in [0, n) on `workers` threads. Results must be written to
// per-index slots; output then does not depend on the worker count.
template <typename Fn>
void parallel_for(size_t n, int workers, Fn&& fn) {
  if (n == 0) return;
  if (workers <= 1 || n == 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const size_t nthreads = std::min<size_t>(static_cast<size_t>(workers), n);
  std::vector<std::thread> threads;
  threads.reserve(nthreads);
  std::exception_ptr first_error;
  std::mutex error_mu;
  for (size_t t = 0; t < nthreads; ++t) {
    const size_t begin = n * t / nthreads;
    const size_t end = n * (t + 1) / nthreads;
    threads.emplace_back([&, begin, end] {
      try {
        for (size_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : threads) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

// Runs fn(begin, end, chunk_index) over contiguous chunks of [0, n), one per
// thread. chunk_index names scratch state (caches) a chunk may reuse; results
// must still go to per-index slots.
template <typename Fn>
void parallel_for_chunked(size_t n, int workers, Fn&& fn) {
  if (n == 0) return;
  const size_t nthreads =
      std::max<size_t>(1, std::min<size_t>(static_cast<size_t>(std::max(workers, 1)), n));
  if (nthreads == 1) {
    fn(size_t{0}, n, size_t{0});
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(nthreads);
  std::exception_ptr first_error;
  std::mutex error_mu;
  for (size_t t = 0; t < nthreads; ++t) {
    const size_t begin = n * t / nthreads;
    const size_t end = n * (t + 1) / nthreads;
    threads.emplace_back([&, begin, end, t] {
      try {
        fn(begin, end, t);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : threads) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace tooka
