#include "geodint/error.hpp"

#include <sstream>

namespace geodint {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::ArgumentTooLarge: return "ArgumentTooLarge";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::ThetaFormViolation: return "ThetaFormViolation";
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::Config: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(message), kind_(kind) {}

namespace {
std::string no_convergence_message(int iterations, double residual, const std::string& detail) {
  std::ostringstream os;
  os << "no convergence after " << iterations << " iterations (residual " << residual << ")";
  if (!detail.empty()) os << ": " << detail;
  return os.str();
}
}  // namespace

NoConvergence::NoConvergence(int iterations, double residual, const std::string& detail)
    : Error(ErrorKind::NoConvergence, no_convergence_message(iterations, residual, detail)),
      iterations_(iterations),
      residual_(residual) {}

}  // namespace geodint
