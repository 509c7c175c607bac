#pragma once

#include <stdexcept>
#include <string>

namespace svdls {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Incompatible matrix or vector shapes.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A parameter outside its documented range (k, lambda, folds, ...).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// A linear system or factorization that cannot be solved stably.
class SingularityError : public Error {
public:
    using Error::Error;
};

/// NaN or Inf where finite data is required, or a diverging iteration.
class NumericError : public Error {
public:
    using Error::Error;
};

/// File parsing or I/O failure.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace svdls
