#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ltevid {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller broke an operation's precondition (length mismatch, bad parameter).
class ContractError : public Error {
public:
    using Error::Error;
};

class UnsupportedSizeError : public Error {
public:
    using Error::Error;
};

/// A bit or sample stream does not have the length its framing requires.
class FramingError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    ConfigError(const std::string& what, std::size_t line = 0)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace ltevid
