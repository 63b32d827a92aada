#pragma once

#include <stdexcept>
#include <string>

namespace apx {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range input.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// Grid too small to represent a polynomial.
class AliasingError : public Error {
public:
    using Error::Error;
};

/// Non-integrable singularity (exponent <= -1).
class DivergenceError : public Error {
public:
    using Error::Error;
};

/// Weight evaluated exactly at a pole.
class PoleError : public Error {
public:
    using Error::Error;
};

/// Weight outside the class required by a formula.
class NotInClassError : public Error {
public:
    using Error::Error;
};

/// Iterative solver failed to make progress.
class SolverError : public Error {
public:
    using Error::Error;
};

}  // namespace apx
