#pragma once

#include <cstdint>

namespace fhl {

/// Per-trial random stream.
///
/// Counter-based: the stream key is SplitMix64-mixed from (master seed,
/// experiment tag, trial index), and draw j returns mix(key + j * golden),
/// the SplitMix64 output function. Every draw is a pure function of the
/// key and its position, so trial i sees the same numbers no matter how many
/// trials run or which worker runs it, and growing the trial count never
/// changes earlier trials. Satisfies UniformRandomBitGenerator.
class Stream {
 public:
  using result_type = std::uint64_t;

  Stream(std::uint64_t master_seed, std::uint64_t tag, std::uint64_t index);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return next_u64(); }

  std::uint64_t next_u64() { return mix(key_ + ++counter_ * kGolden); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Number of failures before the first success of a Bernoulli(p) sequence.
  /// Returns UINT64_MAX for p == 0.
  std::uint64_t geometric(double p);

  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

  /// SplitMix64 finalizer.
  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

/// Stable tag for an experiment name (FNV-1a), used as the stream tag.
std::uint64_t stream_tag(const char* name);

}  // namespace fhl
