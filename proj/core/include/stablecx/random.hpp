#pragma once

#include <array>
#include <cstdint>

namespace stablecx {

/// Philox4x32-10 counter-based block function (Salmon et al., SC'11).
///
/// Every random word in the library is a pure function of (seed, stream,
/// index), so any partition of trial indices across workers reproduces the
/// same values bit for bit.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key) noexcept;
};

/// 128 random bits addressed by a 64-bit draw index.
struct RandomWords {
  std::uint64_t first;
  std::uint64_t second;
};

/// Keyed view of the Philox stream: `words(stream, index)` is deterministic.
class CounterStream {
 public:
  explicit CounterStream(std::uint64_t seed) noexcept;

  RandomWords words(std::uint64_t stream, std::uint64_t index) const noexcept;
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
  Philox4x32::Key key_;
};

/// Uniform double on the open interval (0, 1) from the top 52 bits (midpoints of
/// a 2^-52 grid, so 1 is never reached).
inline double open_unit(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

/// SplitMix64 finalizer; used to derive independent sub-seeds from a seed and a tag.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept;

/// Sequential generator over one Philox stream, for small setup tasks
/// (instance generation, random coefficient vectors) rather than hot loops.
class SequentialRng {
 public:
  SequentialRng(std::uint64_t seed, std::uint64_t stream) noexcept
      : stream_(seed), stream_id_(stream) {}

  std::uint64_t next_u64() noexcept;
  double uniform() noexcept { return open_unit(next_u64()); }
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [lo, hi].
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) noexcept;

 private:
  CounterStream stream_;
  std::uint64_t stream_id_;
  std::uint64_t index_ = 0;
  RandomWords buffer_{};
  bool has_second_ = false;
};

}  // namespace stablecx
