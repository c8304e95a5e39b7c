#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ipw {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Formula-text syntax error. `offset` is the 0-based byte position in the
// input where the problem was detected.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t offset)
        : Error(message + " at offset " + std::to_string(offset)), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

// Violated precondition or invariant of a domain operation (invalid
// partition, empty world set, vocabulary cap, mismatched statement lists...).
class DomainError : public Error {
public:
    using Error::Error;
};

// No probability distribution satisfies the constraint set.
class InfeasibleError : public DomainError {
public:
    using DomainError::DomainError;
};

// The conditioning event has probability zero in every satisfying
// distribution, so conditional bounds are undefined.
class ConditioningError : public DomainError {
public:
    using DomainError::DomainError;
};

// Diagnostic for a knowledge-base file. Line and column are 1-based.
class KbError : public Error {
public:
    KbError(const std::string& message, int line, int column)
        : Error(message + " (line " + std::to_string(line) + ", column " +
                std::to_string(column) + ")"),
          line_(line),
          column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

}  // namespace ipw
