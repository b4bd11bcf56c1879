#pragma once

#include <stdexcept>
#include <string>

namespace iris {

// Error taxonomy mirrored by the CLI exit codes: usage=2, data=3, runtime=4.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace iris
