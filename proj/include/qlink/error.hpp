#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qlink {

enum class ErrorCode {
  InvalidSpec,
  EvanescentMode,
  NonphysicalAttenuation,
  UndefinedSnr,
  EtaOutOfRange,
  StabilityViolation,
  InvalidConfig,
  Infeasible,
};

/// Machine-readable reason code, used in sweep rows and result records.
constexpr std::string_view reason_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSpec: return "invalid_spec";
    case ErrorCode::EvanescentMode: return "evanescent_mode";
    case ErrorCode::NonphysicalAttenuation: return "nonphysical_attenuation";
    case ErrorCode::UndefinedSnr: return "undefined_snr";
    case ErrorCode::EtaOutOfRange: return "eta_out_of_range";
    case ErrorCode::StabilityViolation: return "stability_violation";
    case ErrorCode::InvalidConfig: return "invalid_config";
    case ErrorCode::Infeasible: return "infeasible";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qlink
