// Licensed under the Apache License 2.0 (see LICENSE file).

#pragma once

#include <stdexcept>
#include <string>

namespace covert {

// Invalid arguments and configurations are reported with std::invalid_argument,
// bad indices with std::out_of_range and zero-probability numerics with
// std::domain_error. The types below cover the remaining failure classes.

/// File could not be opened, read or written. The message carries the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. The message carries the path and line number.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation needs data the object does not carry (e.g. ground truth), or the
/// data makes the operation vacuous (no target logs).
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace covert
