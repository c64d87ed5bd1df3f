#pragma once

#include <stdexcept>
#include <string>

namespace moch {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed arguments: non-monotone abscissae, non-finite samples, size mismatch.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// A model parameter outside its admissible set (e.g. lambda == 0).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Run configuration that cannot be honoured (stability bound, bad key).
class ConfigurationError : public Error {
public:
    using Error::Error;
};

/// Query point outside the sampled range.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Data that does not decay at the grid edges.
class BoundaryTruncationError : public Error {
public:
    using Error::Error;
};

/// Time integration could not proceed.
class SolverFailure : public Error {
public:
    using Error::Error;
};

/// Iteration cap reached without meeting the tolerance.
class ConvergenceFailure : public Error {
public:
    using Error::Error;
};

}  // namespace moch
