#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace kinkfit {

/// Failure categories raised by the library. Each operation documents which
/// of these it can produce.
enum class ErrorCode {
  InvalidParameter,
  DegenerateQuadratic,
  ComplexRoots,
  NonPositiveGamma,
  StepTooLarge,
  MaxDepthExceeded,
  InsufficientData,
  DegenerateDesign,
  SingularNormalMatrix,
  NonPositiveY,
  MalformedHeader,
  MalformedRecord,
  NonFiniteValue,
  EmptyPlot,
  NonFiniteSample,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::DegenerateQuadratic: return "DegenerateQuadratic";
    case ErrorCode::ComplexRoots: return "ComplexRoots";
    case ErrorCode::NonPositiveGamma: return "NonPositiveGamma";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::MaxDepthExceeded: return "MaxDepthExceeded";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::DegenerateDesign: return "DegenerateDesign";
    case ErrorCode::SingularNormalMatrix: return "SingularNormalMatrix";
    case ErrorCode::NonPositiveY: return "NonPositiveY";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::MalformedRecord: return "MalformedRecord";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::EmptyPlot: return "EmptyPlot";
    case ErrorCode::NonFiniteSample: return "NonFiniteSample";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> line = std::nullopt)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        line_(line) {}

  ErrorCode code() const noexcept { return code_; }

  /// 1-based input line for parse errors.
  std::optional<std::size_t> line() const noexcept { return line_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> line_;
};

}  // namespace kinkfit
