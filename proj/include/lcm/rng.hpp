#pragma once

#include <array>
#include <cstdint>

namespace lcm {

/// Philox4x32-10 counter-based block cipher (Salmon et al., Random123).
/// Pure function of (counter, key); identical on every platform.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;
  static Counter generate(Counter counter, Key key);
};

/// Stream of variates addressed by (seed, chunk, stream).
///
/// The key is the 64-bit seed; counter words 1..3 hold the chunk index and
/// stream id, word 0 the draw index. Two generators with different
/// (chunk, stream) never share a counter block.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t chunk, std::uint32_t stream = 0);

  std::uint32_t next_u32();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1).
  double uniform_open();
  /// Standard normal by Box-Muller; pairs are cached.
  double normal();
  /// Exponential with rate 1.
  double exponential();
  /// Gamma(shape, 1) by Marsaglia-Tsang, boosted for shape < 1.
  double gamma(double shape);

 private:
  Philox4x32::Key key_;
  Philox4x32::Counter counter_;
  Philox4x32::Counter block_{};
  int used_ = 4;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

/// Mixes two words into a derived seed (SplitMix64 finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace lcm
