#include "limits.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#include "error.hpp"

namespace fhl {

namespace {

int env_cap() {
  const char* raw = std::getenv("FHL_LEVEL_CAP");
  if (raw == nullptr || *raw == '\0') return 0;
  char* end = nullptr;
  long v = std::strtol(raw, &end, 10);
  if (*end != '\0' || v < 1 || v > kHardLevelCap) {
    fail(Errc::ConfigInvalid, std::string("FHL_LEVEL_CAP must be an integer in [1, 62], got '") + raw + "'");
  }
  return static_cast<int>(v);
}

std::atomic<int> g_cap{0};

}  // namespace

int level_cap() {
  if (int env = env_cap(); env > 0) return env;
  int cap = g_cap.load(std::memory_order_relaxed);
  return cap > 0 ? cap : kDefaultLevelCap;
}

void set_level_cap(int cap) {
  require(cap >= 1 && cap <= kHardLevelCap, Errc::ConfigInvalid,
          "level cap must lie in [1, 62], got " + std::to_string(cap));
  g_cap.store(cap, std::memory_order_relaxed);
}

void check_level(int level) {
  require(level >= 0, Errc::InvalidArgument, "negative level " + std::to_string(level));
  int cap = level_cap();
  require(level <= cap, Errc::LevelCapExceeded,
          "level " + std::to_string(level) + " exceeds cap " + std::to_string(cap));
}

}  // namespace fhl
