#include "fki/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fki {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void round_once(Philox4x32::Counter& c, const Philox4x32::Key& k) {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
  const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const auto lo0 = static_cast<std::uint32_t>(p0);
  const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const auto lo1 = static_cast<std::uint32_t>(p1);
  c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

Philox4x32::Counter Philox4x32::generate(Counter ctr, Key key) {
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    round_once(ctr, key);
  }
  return ctr;
}

GaussianStream::GaussianStream(StreamId id)
    : id_(id),
      key_{static_cast<std::uint32_t>(id.seed), static_cast<std::uint32_t>(id.seed >> 32)} {
  if (id.stream >= (1u << 24)) throw std::invalid_argument("stream id must be < 2^24");
}

void GaussianStream::normals(std::uint32_t step, double* out, int n) const {
  if (n > 512) throw std::invalid_argument("at most 512 normals per step");
  const auto path_lo = static_cast<std::uint32_t>(id_.path);
  const auto path_hi = static_cast<std::uint32_t>(id_.path >> 32);
  for (int j = 0; 2 * j < n; ++j) {
    const Philox4x32::Counter ctr{path_lo, path_hi, step,
                                  (id_.stream << 8) | static_cast<std::uint32_t>(j)};
    const auto w = Philox4x32::generate(ctr, key_);
    const double u1 = to_unit_open_closed((static_cast<std::uint64_t>(w[0]) << 32) | w[1]);
    const double u2 = to_unit_open_closed((static_cast<std::uint64_t>(w[2]) << 32) | w[3]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    out[2 * j] = radius * std::cos(angle);
    if (2 * j + 1 < n) out[2 * j + 1] = radius * std::sin(angle);
  }
}

}  // namespace fki
