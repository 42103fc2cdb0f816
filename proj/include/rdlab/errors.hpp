#ifndef RDLAB_ERRORS_HPP
#define RDLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rdlab {

/// Invalid argument or configuration value (gamma < 1, p <= 2, dt <= 0, ...).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A value object is in an invalid state (non-finite field, mismatched domains).
class StateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Polynomial evaluation overflowed to a non-finite value.
class EvaluationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Documented precondition of an operation does not hold.
class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// The time integrator produced a non-finite state.
class BlowUpError : public std::runtime_error {
public:
    BlowUpError(double time, const std::string& what)
        : std::runtime_error(what + " (t = " + std::to_string(time) + ")"), time_(time) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

} // namespace rdlab

#endif
