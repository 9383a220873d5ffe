#pragma once

// Counter-based random numbers for reproducible, order-independent sampling.
//
// Philox4x32-10 (Salmon et al., "Parallel random numbers: as easy as 1, 2,
// 3", SC'11): a 64-bit key and a 128-bit counter are mapped through ten
// multiply-xor rounds to four 32-bit outputs. We key the generator by the
// user seed and split the counter into a 64-bit stream id (high words) and a
// 64-bit block index (low words), so every (seed, stream) pair owns an
// independent sequence of 2^64 blocks and any substream can be materialized
// without touching the others.

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>

namespace naqae {

class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  // Ten-round bijection; exposed for known-answer tests.
  static Counter block(Counter counter, Key key) noexcept;

  // UniformRandomBitGenerator producing 64-bit words.
  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  Philox4x32(std::uint64_t seed, std::uint64_t stream) noexcept;

  result_type operator()() noexcept;

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  Key key_;
  std::uint64_t stream_;
  std::uint64_t block_index_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  unsigned buffered_ = 0;
};

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

// Folds structured identifiers (replication, setting, depth index...) into a
// single stream id. Order of components matters.
std::uint64_t derive_stream(std::initializer_list<std::uint64_t> components) noexcept;

}  // namespace naqae
