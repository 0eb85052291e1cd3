#ifndef CXORDER_ERROR_HPP
#define CXORDER_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace cxorder {

enum class ErrorCode {
  InvalidArgument,
  OutOfDomain,
  DegreeOverflow,
  JumpDifferentiation,
  SupportMismatch,
  OrderOverflow,
  ZeroScale,
  UnknownRule,
  ParseError,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::DegreeOverflow: return "DegreeOverflow";
    case ErrorCode::JumpDifferentiation: return "JumpDifferentiation";
    case ErrorCode::SupportMismatch: return "SupportMismatch";
    case ErrorCode::OrderOverflow: return "OrderOverflow";
    case ErrorCode::ZeroScale: return "ZeroScale";
    case ErrorCode::UnknownRule: return "UnknownRule";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cxorder

#endif  // CXORDER_ERROR_HPP
