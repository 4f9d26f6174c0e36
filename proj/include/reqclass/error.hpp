#pragma once

#include <stdexcept>
#include <string>

namespace reqclass {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input file or record does not conform to its format.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Precondition on an operation's arguments was violated.
class DomainError : public Error {
public:
    using Error::Error;
};

}  // namespace reqclass
