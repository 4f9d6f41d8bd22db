#pragma once

#include <stdexcept>
#include <string>

namespace heisenmag {

// Invalid arguments for a mathematical operation (exit code 1 in the CLI).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// A closed form or a numerical check disagreed with its reference.
struct VerificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotFound : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OracleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace heisenmag

namespace heisenmag {

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace heisenmag
