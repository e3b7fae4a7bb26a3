#include "rng.hpp"

#include <cmath>
#include <limits>

namespace fhl {

Stream::Stream(std::uint64_t master_seed, std::uint64_t tag, std::uint64_t index) {
  // Each word passes through the mixer before the next is folded in, so
  // nearby keys give unrelated streams.
  std::uint64_t k = mix(master_seed + kGolden);
  k = mix(k ^ (tag + 2 * kGolden));
  key_ = mix(k ^ (index + 3 * kGolden));
}

std::uint64_t Stream::geometric(double p) {
  if (p >= 1.0) return 0;
  if (p <= 0.0) return std::numeric_limits<std::uint64_t>::max();
  // U in (0, 1]
  double u = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  double g = std::floor(std::log(u) / std::log1p(-p));
  if (!(g < 1.8e19)) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(g);
}

std::uint64_t stream_tag(const char* name) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const char* c = name; *c != '\0'; ++c) {
    h ^= static_cast<unsigned char>(*c);
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace fhl
