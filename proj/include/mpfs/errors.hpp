#pragma once

#include <stdexcept>
#include <string>

namespace mpfs {

/// Invalid run configuration (bad flag value, incompatible dimensions).
/// The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad input data (unreadable file, malformed payload, non-finite values).
/// The CLI maps this to exit code 1.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Violation of an internal call contract (e.g. a base selector returning
/// indices outside its minipatch). Indicates a programming error.
class ContractError : public std::logic_error {
public:
    explicit ContractError(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace mpfs
