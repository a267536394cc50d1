#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fracguide {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation, or a type
/// invariant violated at construction.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Mittag-Leffler evaluation left its accuracy envelope.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Selector or saddle check asked for a structure/set combination that has
/// no finite certificate.
class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// Non-finite value produced while stepping a trajectory.
class NumericError : public Error {
public:
    NumericError(const std::string& what, std::size_t node)
        : Error(what + " (node " + std::to_string(node) + ")"), node_(node) {}

    [[nodiscard]] std::size_t node() const noexcept { return node_; }

private:
    std::size_t node_;
};

/// Malformed scenario or CSV input; carries the 1-based source line.
class ParseError : public Error {
public:
    ParseError(int line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    [[nodiscard]] int line() const noexcept { return line_; }

private:
    int line_;
};

}  // namespace fracguide
