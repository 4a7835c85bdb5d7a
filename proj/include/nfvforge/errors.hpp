#pragma once

#include <stdexcept>
#include <string>

namespace nfvforge {

/// Bad configuration: unknown keys, out-of-range values, invalid parameters.
/// The CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Bad input data: malformed files, violated preconditions on runtime inputs.
/// The CLI maps this to exit code 3.
struct DataError : std::runtime_error {
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nfvforge
