#pragma once

#include <stdexcept>
#include <string>

namespace wmarena {

/// Runtime failure inside the library (I/O, numerical breakdown, corrupt artifact).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The caller handed in something that violates an operation's precondition.
/// The CLI maps this to exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace wmarena
