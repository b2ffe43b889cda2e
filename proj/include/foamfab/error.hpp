#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace foamfab {

// Base class for all errors raised on bad user input. The CLI maps these to
// exit code 2; anything else reaching main() is treated as internal (exit 1).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input text or bytes (STL, CSV, config, G-code).
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t position)
        : Error(msg), position_(position) {}

    // Byte offset for binary inputs, 1-based line number for text inputs.
    std::size_t position() const { return position_; }

private:
    std::size_t position_ = 0;
};

// Well-formed input that violates a documented invariant (e.g. an open mesh).
class ValidationError : public Error {
public:
    using Error::Error;
};

// Argument outside an operation's stated domain.
class DomainError : public Error {
public:
    using Error::Error;
};

// Missing or inconsistent job configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace foamfab
