#pragma once

#include <stdexcept>
#include <string>

namespace l0fa {

enum class ErrorKind {
  InvalidDimension,
  Shape,
  Parameter,
  InvalidInput,
  InfeasiblePoint,
  InfeasibleData,
  NumericalBreakdown,
  InvalidConfig,
  Io,
};

const char* to_string(ErrorKind kind) noexcept;

/// Library-wide exception. The kind drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace l0fa
