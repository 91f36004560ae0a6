#pragma once

#include <stdexcept>
#include <string>

namespace tvqc {

// Invalid argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Caller misuse: bad sizes, empty grids, unknown modes.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Iterative numerics that failed to converge or produced an unusable result.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// File / schema problems.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace tvqc
