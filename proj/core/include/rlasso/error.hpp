#pragma once

#include <stdexcept>
#include <string>

namespace rlasso {

// Failure classes map one-to-one onto the CLI exit-code taxonomy:
// ConfigError -> 2, DataError -> 3, NumericError -> 4.

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rlasso
