#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace netpop {

/// Philox4x64-10 block function (Salmon et al., "Parallel random numbers:
/// as easy as 1, 2, 3"). Maps a 256-bit counter and a 128-bit key to 256
/// pseudo-random bits.
std::array<std::uint64_t, 4> philox4x64(std::array<std::uint64_t, 4> counter,
                                        std::array<std::uint64_t, 2> key);

/// Counter-based generator built on Philox4x64-10.
///
/// The key is (seed, stream); the counter starts at zero and advances by one
/// block per four outputs. Two generators with different (seed, stream) pairs
/// are statistically independent, so replicate k of an experiment simply uses
/// stream k (or a stream derived from k with fork()). All conversions to
/// uniforms are done here rather than through <random> distributions, whose
/// output is implementation-defined, so a (seed, stream) pair produces the
/// same draws on every platform.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) : key_{seed, stream} {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (used_ == 4) refill();
    return block_[used_++];
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform on the open interval (0, 1).
  double uniform_open() {
    double u;
    do u = uniform();
    while (u == 0.0);
    return u;
  }

  /// Uniform integer in [0, bound) by rejection; bound > 0.
  std::uint64_t below(std::uint64_t bound);

  /// Independent generator for a named sub-task (same seed, derived stream).
  Rng fork(std::uint64_t tag) const;

  std::uint64_t seed() const { return key_[0]; }
  std::uint64_t stream() const { return key_[1]; }

 private:
  void refill() {
    block_ = philox4x64({counter_, 0, 0, 0}, key_);
    ++counter_;
    used_ = 0;
  }

  std::array<std::uint64_t, 2> key_;
  std::uint64_t counter_ = 0;
  std::array<std::uint64_t, 4> block_{};
  int used_ = 4;
};

/// Stateless mixing of two 64-bit words (SplitMix64 finalizer on a + golden*b).
std::uint64_t mix_stream(std::uint64_t a, std::uint64_t b);

}  // namespace netpop
