#include "hidnet/error.hpp"

namespace hidnet {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid_argument";
    case ErrorKind::IndexOutOfRange: return "index_out_of_range";
    case ErrorKind::DimensionMismatch: return "dimension_mismatch";
    case ErrorKind::NonFinite: return "non_finite";
    case ErrorKind::SingularSystem: return "singular_system";
    case ErrorKind::GuardExceeded: return "guard_exceeded";
    case ErrorKind::NotStochastic: return "not_stochastic";
    case ErrorKind::Infeasible: return "infeasible";
    case ErrorKind::Io: return "io";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::ShapeMismatch: return "shape_mismatch";
    case ErrorKind::Divergence: return "divergence";
  }
  return "unknown";
}

}  // namespace hidnet
