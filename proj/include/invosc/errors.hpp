#pragma once

#include <stdexcept>
#include <string>

namespace invosc {

/// Raised when an operation is called outside the coupling regime it is defined for
/// (e.g. the real similarity parameter at or beyond the exceptional point).
class RegimeError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Matrix dimension too small or mismatched.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Binary operation on operators carrying different basis tags.
class BasisError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Iterative kernel failed (QR iteration cap, overflow in the exponential).
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class FrameError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Non-finite state produced while stepping a trajectory.
class StepError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace invosc
