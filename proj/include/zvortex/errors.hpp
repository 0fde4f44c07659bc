#pragma once

#include <stdexcept>
#include <string>

namespace zvortex {

/// Argument outside the mathematical domain of an operation (z <= 0, U_f < 0, ...).
class DomainError : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

/// Caller broke a documented precondition (point outside a contour, bad step size, ...).
class PreconditionError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// Result would be meaningless in double precision.
class NumericGuardError : public std::range_error
{
public:
    using std::range_error::range_error;
};

/// Energy below the ground level of a ladder.
class BelowLadderError : public DomainError
{
public:
    using DomainError::DomainError;
};

/// Ensemble configuration that cannot be simulated.
class ConfigError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

template <class Error>
inline void require(bool condition, const std::string &message)
{
    if (!condition) {
        throw Error(message);
    }
}

} // namespace detail

} // namespace zvortex
