#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace courant {

/// Base of every error thrown by the workbench.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input: arity and bundle mismatches, schema
/// violations, bad references. The CLI maps these to exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public InputError {
 public:
  ParseError(std::size_t position, const std::string& message)
      : InputError("parse error at " + std::to_string(position) + ": " + message),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace courant
