#pragma once

#include <stdexcept>
#include <string>

namespace motionblur {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument violates a documented precondition (t <= 0, bad grid size, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// File could not be read or written, or its contents are malformed.
class IoError : public Error {
public:
    using Error::Error;
};

/// A linear system is too ill-conditioned, or a symmetry check failed.
class NumericalError : public Error {
public:
    using Error::Error;
};

inline void require(bool ok, const std::string& what) {
    if (!ok) throw DomainError(what);
}

}  // namespace motionblur
