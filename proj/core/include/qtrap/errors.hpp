#pragma once

#include <stdexcept>
#include <string>

namespace qtrap {

/// Argument outside the mathematical domain of an operation (e.g. gamma <= -1/4).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Incompatible objects combined (e.g. wave functions on different grids).
class StructuralError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Input violates a documented precondition (normalization, support, boundary behaviour).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed (LAPACK info != 0, singular solve, ...).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A closed-form construction failed a self-check that should hold identically.
class InternalConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace qtrap
