#pragma once

#include <cstdint>
#include <string_view>

namespace tableguard {

/// Counter-based SplitMix64 stream keyed by (seed, key). The same key always
/// yields the same sequence on every platform; distinct keys give
/// independent sequences. Consumption per call is fixed:
///   next_u64 / next_unit      1 word
///   next_gaussian             2 words (Box-Muller, second value discarded)
///   next_below(n)             1 word, plus one per rejected draw
class DeterministicStream {
 public:
  DeterministicStream(std::uint64_t seed, std::string_view key);

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1).
  double next_unit();
  /// Uniform integer in [0, n); n must be > 0.
  std::uint64_t next_below(std::uint64_t n);
  double next_gaussian();

  std::uint64_t draws() const { return draws_; }

 private:
  std::uint64_t state_;
  std::uint64_t draws_ = 0;
};

std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace tableguard
