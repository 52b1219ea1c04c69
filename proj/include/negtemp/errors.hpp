#pragma once

#include <stdexcept>
#include <string>

namespace negtemp {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidDimension : public Error {
public:
    using Error::Error;
};

class InvalidEmbedding : public Error {
public:
    using Error::Error;
};

class InvalidSlot : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class PositivityViolation : public Error {
public:
    using Error::Error;
};

class NoUniqueSteadyState : public Error {
public:
    using Error::Error;
};

/// Steady-state solve finished but the residual against the full Liouvillian is too large.
class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class StepSizeError : public Error {
public:
    StepSizeError(const std::string& what, double drift)
        : Error(what), drift_(drift) {}
    double drift() const noexcept { return drift_; }

private:
    double drift_;
};

/// Fock cutoff reached n_cap before observables stabilised.
class TruncationFailure : public Error {
public:
    TruncationFailure(const std::string& what, double last_delta, int last_n_max)
        : Error(what), last_delta_(last_delta), last_n_max_(last_n_max) {}
    double last_delta() const noexcept { return last_delta_; }
    int last_n_max() const noexcept { return last_n_max_; }

private:
    double last_delta_;
    int last_n_max_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// A sweep point failed; the message carries the failing coordinates.
class ScenarioFailure : public Error {
public:
    using Error::Error;
};

} // namespace negtemp
