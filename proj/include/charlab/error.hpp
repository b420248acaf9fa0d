#pragma once

#include <stdexcept>
#include <string>

namespace charlab {

// Error taxonomy shared by all modules. The CLI maps kinds to exit codes:
// Validation -> 1, Budget -> 2, Usage -> 64.
enum class ErrorKind {
  Validation,   // bad input data (descriptor, non-invertible generator, malformed plan, ...)
  Budget,       // an explicit resource budget was exceeded
  Numeric,      // a numeric routine failed to certify its result
  Internal      // invariant breach inside the library
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail_validation(const std::string& msg) {
  throw Error(ErrorKind::Validation, msg);
}
[[noreturn]] inline void fail_budget(const std::string& msg) {
  throw Error(ErrorKind::Budget, msg);
}
[[noreturn]] inline void fail_numeric(const std::string& msg) {
  throw Error(ErrorKind::Numeric, msg);
}
[[noreturn]] inline void fail_internal(const std::string& msg) {
  throw Error(ErrorKind::Internal, msg);
}

inline void require(bool cond, ErrorKind kind, const std::string& msg) {
  if (!cond) throw Error(kind, msg);
}

}  // namespace charlab
