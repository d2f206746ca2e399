#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace csb {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input file. `line()` is 1-based; 0 means the whole file.
class ParseError : public Error {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

// No arm meets the feasibility threshold.
class InfeasibleInstanceError : public Error {
public:
    using Error::Error;
};

class ArmIndexError : public Error {
public:
    using Error::Error;
};

// T * gap^2 <= 1: quota and bonus are undefined for this round.
class RoundOverflowError : public Error {
public:
    using Error::Error;
};

class DegenerateHorizonError : public Error {
public:
    using Error::Error;
};

// A bound formula hit a zero gap or a log argument <= 1.
class DegenerateGapError : public Error {
public:
    using Error::Error;
};

class ContractViolation : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace csb
