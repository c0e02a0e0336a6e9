#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace twistkit {

enum class ErrorKind {
  // expressions
  UnknownIdentifier,
  SyntaxError,
  ZeroDenominator,
  PoleError,
  // tensor fields
  IndexOutOfRange,
  RepeatedIndex,
  DegreeMismatch,
  DimensionMismatch,
  DegenerateForm,
  OddDimension,
  // verdicts
  NotClosed,
  // lattice
  BadSiteCount,
  NoPotential,
  SingularPi,
  OffShell,
  // input files
  IoError,
  SchemaError,
  ExpressionError,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace twistkit
