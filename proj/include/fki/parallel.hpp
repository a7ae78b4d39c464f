#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fki {

/// Worker pool size and shard count. Results depend on `shards` only.
struct Execution {
  int workers = 1;
  int shards = 16;
};

/// Splits [0, n) into `exec.shards` contiguous ranges, runs fn(begin, end, state)
/// for each on up to `exec.workers` threads and returns the per-shard states in
/// shard order.
template <class State, class Fn>
std::vector<State> run_sharded(std::uint64_t n, const Execution& exec, const State& init, Fn&& fn) {
  const int shards = std::max(1, exec.shards);
  std::vector<State> states(shards, init);
  auto bounds = [&](int s) {
    return std::pair<std::uint64_t, std::uint64_t>{n * s / shards, n * (s + 1) / shards};
  };
  const int workers = std::clamp(exec.workers, 1, shards);
  if (workers == 1) {
    for (int s = 0; s < shards; ++s) {
      auto [b, e] = bounds(s);
      fn(b, e, states[s]);
    }
    return states;
  }
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int s = w; s < shards; s += workers) {
        try {
          auto [b, e] = bounds(s);
          fn(b, e, states[s]);
        } catch (...) {
          std::lock_guard lock(error_mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return states;
}

}  // namespace fki
