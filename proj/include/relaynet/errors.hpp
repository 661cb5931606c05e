#pragma once

#include <stdexcept>
#include <string>

namespace relaynet {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation
/// (negative distance, non-PD covariance, negative residual power, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A model object (network, profile, sweep spec, config) failed validation.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// An operation was called on an input shape it does not support,
/// e.g. a single-relay formula on a T != 3 network.
class UsageError : public Error {
public:
    using Error::Error;
};

/// An enumeration would exceed its configured size cap.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// A numerical routine produced NaN or could not bracket its target.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// A feasibility search found no feasible point in its interval.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

} // namespace relaynet
