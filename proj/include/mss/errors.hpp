#pragma once

#include <stdexcept>
#include <string>

namespace mss {

/// Raised when an input column mapping cannot be resolved.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a persisted file is malformed, truncated or of another version.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for requests that reference something that does not exist
/// (an unknown snapshot, an unindexed record).
class NotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mss
