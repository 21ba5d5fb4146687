#pragma once

#include <stdexcept>
#include <string>

namespace limlab {

/// Malformed or out-of-range weight/function/parameter specification.
class SpecError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Evaluation requested exactly on a weight's or function's singular set.
class SingularPointError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical quantity could not be formed (vanishing mass, insufficient divergence, ...).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on a previously computed verdict is not met.
class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace limlab
