#pragma once

#include <stdexcept>
#include <string>

namespace rkhs {

/// Raised when arguments do not belong to the domain an operation expects
/// (center/kernel/op variant mismatches, values outside their set).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation would exceed a configured resource cap.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerically degenerate configuration (zero denominators, all-zero Gram).
class DegeneracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file contents.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rkhs
