#pragma once

#include <stdexcept>
#include <string>

namespace geolab {

enum class ErrorCode {
  invalid_input,
  degenerate_input,
  precondition_violated,
  unsupported_space,
  insufficient_data,
  insufficient_curve,
  invalid_alpha,
  threshold_not_met,
  strategy_fault,
  parse_error,
};

const char* to_string(ErrorCode code);

class GeoError : public std::runtime_error {
 public:
  GeoError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw GeoError(code, what);
}

}  // namespace geolab
