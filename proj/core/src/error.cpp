#include "optokerr/error.hpp"

namespace optokerr {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidParams: return "invalid parameters";
    case ErrorCode::kUnphysicalLoss: return "unphysical total loss";
    case ErrorCode::kUnphysicalAbsorption: return "unphysical absorption";
    case ErrorCode::kNoStationaryState: return "no stationary state";
    case ErrorCode::kUnderdetermined: return "underdetermined";
    case ErrorCode::kPlateCollision: return "plate collision";
    case ErrorCode::kZeroTemperatureBath: return "zero-temperature bath";
    case ErrorCode::kNoStableState: return "no stable state";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace optokerr
