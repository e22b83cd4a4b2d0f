#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hidnet {

// Machine-readable error category. The CLI prints `error:<kind>: <message>`.
enum class ErrorKind {
  InvalidArgument,
  IndexOutOfRange,
  DimensionMismatch,
  NonFinite,
  SingularSystem,
  GuardExceeded,
  NotStochastic,
  Infeasible,
  Io,
  Parse,
  ShapeMismatch,
  Divergence,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace hidnet
