#pragma once

#include <stdexcept>
#include <string>

namespace pmeb {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or unsupported experiment input (shape, resolution, datum, config file).
class ConfigurationError : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

/// The requested bound does not exist for these inputs (no admissible epsilon).
class InfeasibilityError : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

/// An operation was called for a regime or ledger variant it does not serve.
class UsageError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class PositivityError : public Error {
public:
    using Error::Error;
};

class EstimationError : public Error {
public:
    using Error::Error;
};

} // namespace pmeb
