#pragma once

#include <stdexcept>
#include <string>

namespace fhl {

// Numeric values are part of the C ABI (see include/fhl/fhl.h); append only.
enum class Errc : int {
  CoordOutOfRange = 1,
  NoParent = 2,
  LevelMismatch = 3,
  UnsupportedDimension = 4,
  LevelCapExceeded = 5,
  SearchOverflow = 6,
  DegenerateGeneration = 7,
  DepthInsufficient = 8,
  DegenerateInput = 9,
  InsufficientPrecision = 10,
  SideConditionViolated = 11,
  ConfigInvalid = 12,
  InvalidArgument = 13,
  Io = 14,
  BudgetExceeded = 15,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& what);

inline void require(bool ok, Errc code, const std::string& what) {
  if (!ok) fail(code, what);
}

}  // namespace fhl
