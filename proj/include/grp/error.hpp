#pragma once

#include <stdexcept>
#include <string>

namespace grp {

enum class ErrorKind {
  InvalidArgument,  // caller passed something outside an operation's domain
  InvalidTrace,     // a Trace value breaks its structural invariants
  InvalidConfig,
};

// Thrown by the C++ core. The C API maps each kind onto a status code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace grp
