#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace abacus {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text. Carries the 1-based line number when known (0 otherwise).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Well-formed input that violates a model invariant (non-positive weight, self-loop, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Unknown node, dimension or item.
class LookupError : public Error {
public:
    using Error::Error;
};

/// A fixed community table does not cover every node of a slice.
class CoverageError : public Error {
public:
    using Error::Error;
};

/// Two assignments were supplied for one dimension.
class DuplicateDimensionError : public Error {
public:
    using Error::Error;
};

/// A ratio or density whose denominator is zero.
class UndefinedMeasureError : public Error {
public:
    using Error::Error;
};

/// Brute-force enumeration refused because the item universe is too large.
class RefusalError : public Error {
public:
    using Error::Error;
};

}  // namespace abacus
