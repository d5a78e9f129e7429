#pragma once

#include <stdexcept>
#include <string>

namespace optokerr {

enum class ErrorCode {
  kInvalidParams,
  kUnphysicalLoss,
  kUnphysicalAbsorption,
  kNoStationaryState,
  kUnderdetermined,
  kPlateCollision,
  kZeroTemperatureBath,
  kNoStableState,
  kConfig,
  kIo,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace optokerr
