#pragma once

#include <cstdint>

namespace hsl {

/// Purposes that get their own independent random streams under one seed.
enum class StreamTag : std::uint64_t {
  kMarginal = 1,
  kNoise = 2,
  kAdversary = 3,
  kMalicious = 4,
  kOrthogonal = 5,
  kTarget = 6,
  kProperties = 7,
  kLearner = 8,
  kEvaluation = 9,
};

/// Mixes a seed with a tag into a new, well-separated seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);
inline std::uint64_t derive_seed(std::uint64_t seed, StreamTag tag) {
  return derive_seed(seed, static_cast<std::uint64_t>(tag));
}

/// Counter-based generator: the stream for (seed, tag, index) is a pure function
/// of those three values, so sample i never depends on how many samples were
/// drawn before it or on which thread drew it.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, StreamTag tag, std::uint64_t index);

  std::uint64_t next_u64();
  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on (0, 1].
  double uniform_pos();
  /// Standard normal (Box-Muller; the second variate is cached).
  double normal();
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t state_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace hsl
