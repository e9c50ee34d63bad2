#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace toral {

/// Malformed or out-of-contract input. The CLI maps this to exit code 2.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input matrix has an eigenvalue that is a root of unity (or is singular).
class NonErgodicError : public InputError {
 public:
  NonErgodicError(const std::string& what, std::optional<unsigned> witness)
      : InputError(what), witness_(witness) {}
  std::optional<unsigned> witness() const { return witness_; }

 private:
  std::optional<unsigned> witness_;
};

/// A search ran into its configured cap. Says nothing about existence.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A checked mathematical invariant failed. Exit code 1 in the CLI.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace toral
