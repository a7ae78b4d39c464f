#pragma once

#include <array>
#include <cstdint>

namespace fki {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123).
/// Pure function of (counter, key); no internal state.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter ctr, Key key);
};

/// Identifies one reproducible stream of standard normals.
///
/// A draw is addressed by (seed, stream, path, step, coordinate), so any path
/// can be regenerated without touching the others.
struct StreamId {
  std::uint64_t seed = 0;
  std::uint32_t stream = 0;
  std::uint64_t path = 0;
};

class GaussianStream {
 public:
  explicit GaussianStream(StreamId id);

  /// Fills out[0..n) with independent N(0,1) draws for the given step index.
  void normals(std::uint32_t step, double* out, int n) const;

  const StreamId& id() const { return id_; }

 private:
  StreamId id_;
  Philox4x32::Key key_;
};

/// Maps a 64-bit word to a double in (0, 1].
inline double to_unit_open_closed(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace fki
