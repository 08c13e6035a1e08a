#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <random>

namespace fspde {

/// Philox4x32-10 counter-based bijection (Salmon et al.). Maps a 128-bit
/// counter and 64-bit key to four 32-bit outputs.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// SplitMix64 finaliser, used to derive child seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of sub-stream `index` below `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Independent random stream identified by (seed, stream_id). The sequence is
/// a pure function of those two numbers, so streams can be generated in any
/// order or on any thread. Satisfies UniformRandomBitGenerator.
class RngStream {
 public:
  using result_type = std::uint32_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()();

  /// Standard normal draw.
  double normal() { return normal_(*this); }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  unsigned next_ = 4;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace fspde
