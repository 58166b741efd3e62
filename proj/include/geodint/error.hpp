#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace geodint {

enum class ErrorKind {
  NonFinite,
  ArgumentTooLarge,
  SingularMatrix,
  DimensionMismatch,
  NotSymmetric,
  NoConvergence,
  ThetaFormViolation,
  DomainViolation,
  Config,
};

const char* to_string(ErrorKind kind) noexcept;

// Base exception for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised by the implicit solver when the residual does not reach tolerance.
class NoConvergence : public Error {
 public:
  NoConvergence(int iterations, double residual, const std::string& detail = {});
  int iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  int iterations_;
  double residual_;
};

}  // namespace geodint
