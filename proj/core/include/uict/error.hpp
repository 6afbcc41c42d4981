#pragma once

#include <stdexcept>
#include <string>

namespace uict {

// Base of every error raised by the library. The subclasses map one-to-one
// onto the exit codes of the command-line tool.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Precondition or parameter-range violation (bad N, a <= 0, x out of range).
class DomainError : public Error {
public:
    using Error::Error;
};

// A numerical guard tripped: node cap exceeded, bracket too wide, censoring
// above threshold, solver did not converge.
class NumericalGuardError : public Error {
public:
    using Error::Error;
};

// Malformed input stream or file.
class FormatError : public Error {
public:
    using Error::Error;
};

}  // namespace uict
