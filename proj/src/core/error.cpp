#include "error.hpp"

namespace fhl {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::CoordOutOfRange: return "CoordOutOfRange";
    case Errc::NoParent: return "NoParent";
    case Errc::LevelMismatch: return "LevelMismatch";
    case Errc::UnsupportedDimension: return "UnsupportedDimension";
    case Errc::LevelCapExceeded: return "LevelCapExceeded";
    case Errc::SearchOverflow: return "SearchOverflow";
    case Errc::DegenerateGeneration: return "DegenerateGeneration";
    case Errc::DepthInsufficient: return "DepthInsufficient";
    case Errc::DegenerateInput: return "DegenerateInput";
    case Errc::InsufficientPrecision: return "InsufficientPrecision";
    case Errc::SideConditionViolated: return "SideConditionViolated";
    case Errc::ConfigInvalid: return "ConfigInvalid";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Io: return "Io";
    case Errc::BudgetExceeded: return "BudgetExceeded";
  }
  return "Unknown";
}

void fail(Errc code, const std::string& what) {
  throw Error(code, std::string(errc_name(code)) + ": " + what);
}

}  // namespace fhl
