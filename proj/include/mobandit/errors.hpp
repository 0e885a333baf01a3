#pragma once
#include <stdexcept>
#include <string>

namespace mob {

// Invalid user-supplied configuration (CLI exit code 1).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure: lost positive-definiteness, LP iteration cap,
// unbounded canonical LP (CLI exit code 2).
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mob
