#pragma once

#include <stdexcept>
#include <string>

namespace ceal {

// Bad argument values or shapes (dimension mismatch, out-of-range parameters).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A documented precondition on the input was violated by the caller,
// e.g. quantizing a vector whose norm exceeds the quantizer radius.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Bit string is truncated or has trailing garbage.
class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bit string parsed, but the decoded level falls outside [0, p].
class CorruptionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ceal
