#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace fki {

/// Streaming mean/variance (Welford), mergeable across shards (Chan et al.).
struct RunningStats {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }

  void merge(const RunningStats& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double total = static_cast<double>(n + o.n);
    const double delta = o.mean - mean;
    mean += delta * static_cast<double>(o.n) / total;
    m2 += o.m2 + delta * delta * static_cast<double>(n) * static_cast<double>(o.n) / total;
    n += o.n;
  }

  /// Unbiased sample variance; 0 for fewer than two samples.
  double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
  double std_error() const { return n > 1 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0; }
};

/// Merges shard results in shard order.
inline RunningStats merge_all(const std::vector<RunningStats>& parts) {
  RunningStats out;
  for (const auto& p : parts) out.merge(p);
  return out;
}

}  // namespace fki
