#pragma once

#include <stdexcept>
#include <string>

namespace cachesim {

// Raised when an adaptive routine fails to reach its tolerance. Callers must
// not treat the partial value as trustworthy.
class NumericsError : public std::runtime_error {
public:
    explicit NumericsError(const std::string& what) : std::runtime_error(what) {}
};

// Raised on malformed configuration input; the message names the offending key.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace cachesim
