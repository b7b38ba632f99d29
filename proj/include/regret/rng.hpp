#pragma once

#include <cstdint>

#include "regret/special.hpp"

namespace regret {

/// Deterministic counter-based random stream.
///
/// A stream is identified by (base_seed, stream_index).  The state is seeded
/// through two rounds of the SplitMix64 finalizer so that nearby stream
/// indices land at unrelated points of the state space, then advanced with the
/// standard SplitMix64 increment.  Streams are cheap to construct, never
/// allocate, and are safe to use from one thread at a time; replications own
/// one stream each, which is what makes experiment output independent of the
/// worker count.
class RngStream {
 public:
  RngStream(std::uint64_t base_seed, std::uint64_t stream_index)
      : stream_index_(stream_index) {
    state_ = mix(mix(base_seed) ^
                 (0x9e3779b97f4a7c15ULL * (stream_index + 0x632be59bd9b4e019ULL)));
  }

  std::uint64_t stream_index() const { return stream_index_; }

  /// Next raw 64-bit value (SplitMix64).
  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  /// Uniform draw strictly inside (0,1) with 53-bit resolution.
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal draw via the inverse-CDF map (monotone in the uniform,
  /// which keeps common-random-number couplings order-preserving).
  double next_normal() { return norm_quantile(next_uniform()); }

  /// Uniform index in {0, ..., n-1} (n >= 1) via 128-bit multiply.
  std::size_t next_index(std::size_t n) {
    const unsigned __int128 wide =
        static_cast<unsigned __int128>(next_u64()) *
        static_cast<unsigned __int128>(n);
    return static_cast<std::size_t>(wide >> 64);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t state_;
  std::uint64_t stream_index_;
};

}  // namespace regret
