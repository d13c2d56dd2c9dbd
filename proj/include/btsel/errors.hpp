#pragma once

#include <stdexcept>
#include <string>

namespace btsel {

// Bad flags or option combinations. The CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad input data: misaligned pools, invalid metric inputs, malformed files.
// The CLI maps this to exit code 3.
struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace btsel
