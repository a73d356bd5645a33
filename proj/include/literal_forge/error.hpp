#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lforge {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Unreadable or missing input.
class IoError : public Error {
public:
    using Error::Error;
};

/// Malformed N-Triples in strict mode. `line` is 1-based.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& message)
        : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class SerializeError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration; raised before any transformation work starts.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A strategy could not process a literal group.
class StrategyError : public Error {
public:
    using Error::Error;
};

}  // namespace lforge
