#pragma once

#include <stdexcept>
#include <string>

namespace spcv {

// Invalid run configuration: unknown keys, malformed values, bad profiles.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Structurally valid configuration whose parameter values are unusable
// (out of domain, or producing degenerate folds such as an empty analysis set).
struct ParamError : std::runtime_error {
  explicit ParamError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace spcv
