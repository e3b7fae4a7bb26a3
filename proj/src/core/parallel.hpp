#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "rng.hpp"

namespace fhl {

/// Seed material for a batch of independent trials: trial i always uses
/// Stream(seed, tag, i). `workers` only changes scheduling, never results.
struct TrialRng {
  std::uint64_t seed = 0;
  std::uint64_t tag = 0;
  unsigned workers = 1;

  Stream stream(std::uint64_t trial) const { return Stream(seed, tag, trial); }
  TrialRng with_tag(std::uint64_t new_tag) const { return TrialRng{seed, new_tag, workers}; }
};

/// Evaluates body(i) for every i in [0, count) and returns the results in
/// index order. Work is handed out in fixed-size chunks to `workers` threads.
template <class T, class Body>
std::vector<T> map_trials(std::uint64_t count, unsigned workers, Body&& body) {
  std::vector<T> out(count);
  workers = std::max(1u, workers);
  if (workers == 1 || count < 2) {
    for (std::uint64_t i = 0; i < count; ++i) out[i] = body(i);
    return out;
  }
  constexpr std::uint64_t kChunk = 256;
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    for (;;) {
      std::uint64_t begin = next.fetch_add(kChunk);
      if (begin >= count) return;
      std::uint64_t end = std::min(count, begin + kChunk);
      try {
        for (std::uint64_t i = begin; i < end; ++i) out[i] = body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace fhl
