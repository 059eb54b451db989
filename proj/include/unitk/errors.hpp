#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace unitk {

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Arithmetic outside its domain: inverting zero, unitals in a non-square order plane.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Unsupported construction parameters (e.g. a field size without a fixed modulus).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Mismatched shapes: v != b for a dual, permutations of different degree.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// An index outside the range of the structure it refers to.
class BoundsError : public Error {
public:
    using Error::Error;
};

/// A violated precondition of an operation.
class ContractError : public Error {
public:
    using Error::Error;
};

/// A configured budget (tree nodes, group size) was exceeded before an exact answer was reached.
class ResourceError : public Error {
public:
    using Error::Error;
};

/// Malformed input text. Carries a 1-based line and column (0 when unknown).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column = 0)
        : Error(format(what, line, column)), line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    static std::string format(const std::string& what, std::size_t line, std::size_t column) {
        std::string out = "line " + std::to_string(line);
        if (column != 0)
            out += ", column " + std::to_string(column);
        return out + ": " + what;
    }

    std::size_t line_;
    std::size_t column_;
};

}  // namespace unitk
