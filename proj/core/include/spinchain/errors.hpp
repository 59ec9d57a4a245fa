#pragma once

#include <stdexcept>
#include <string>

namespace spinchain {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the domain of an operation (zero axis, r outside [0,3], ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// H is not differentiable on H^{-1}(0); raised when a gradient of H is needed below the cutoff.
class SingularPointError : public DomainError {
public:
    SingularPointError(const std::string& what, double h)
        : DomainError(what), h_(h) {}
    double h() const noexcept { return h_; }

private:
    double h_;
};

// The adaptive integrator could not make progress.
class IntegrationError : public Error {
public:
    IntegrationError(const std::string& what, double achieved_time)
        : Error(what), achieved_time_(achieved_time) {}
    double achieved_time() const noexcept { return achieved_time_; }

private:
    double achieved_time_;
};

// No return to the torus orbit was detected before the time limit.
class SearchError : public Error {
public:
    using Error::Error;
};

// A detected return could not be polished to the requested residual.
class RefinementError : public Error {
public:
    RefinementError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class NotInImageError : public DomainError {
public:
    using DomainError::DomainError;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

// Invalid configuration (loop parameters, integrator settings).
class ParameterError : public DomainError {
public:
    using DomainError::DomainError;
};

// Eigenvalue pattern sits within tolerance of more than one Williamson class.
class DegenerateClassificationError : public Error {
public:
    using Error::Error;
};

}  // namespace spinchain
