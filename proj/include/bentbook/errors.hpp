#pragma once

#include <stdexcept>
#include <string>

namespace bentbook {

// Raised when an input exceeds a size guard (variable cap, search guard,
// materialization guard). Callers may retry with an explicit override.
class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A documented precondition of an operation does not hold for its input.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computed object failed a property it is required to have.
class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reading, writing or parsing a file failed.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bentbook
