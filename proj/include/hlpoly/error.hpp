#pragma once

#include <stdexcept>
#include <string>

namespace hlpoly {

// Every failure raised by the library carries one of these categories so the
// C API can map it onto a stable status code.
enum class ErrorKind {
  kInvalidArgument,
  kDimensionMismatch,
  kBudgetExceeded,
  kPrecondition,
  kInvalidPolynomial,
  kParse,
  kIo,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace hlpoly
