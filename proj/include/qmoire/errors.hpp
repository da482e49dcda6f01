#pragma once

#include <stdexcept>
#include <string>

namespace qmoire {

/// Grid or step resolution too coarse for the requested operation.
class SamplingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Configuration file problem; carries the 1-based line number when known.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
          line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

}  // namespace qmoire
