#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ultrajet {

enum class ErrorCode {
  NonLogConvex,
  NotNormalized,
  NonPositive,
  PrefixExhausted,
  InvalidArgument,
  Unbounded,
  QuasianalyticInput,
  TailUnreliable,
  NonIncreasingResult,
  OrderExceeded,
  PoleOnSet,
  ATooSmall,
  DepthInsufficient,
  WidthBudget,
  DegenerateGap,
  JetNotInClass,
  RowChainUnavailable,
  NotAdmissibleInSample,
  Io,
  Parse,
};

[[nodiscard]] std::string_view to_string(ErrorCode code) noexcept;

/// Exception carrying one of the library error codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ultrajet
