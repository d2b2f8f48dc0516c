#pragma once

#include <stdexcept>
#include <string>

namespace stefanlie {

// Base of every error thrown by the library. The CLI maps ConfigError to
// exit status 2 and every other Error to 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Specific heat or diffusivity law that is non-positive where it is used.
class ConstitutiveError : public Error {
public:
    using Error::Error;
};

// Argument outside the range on which an operation is defined.
class DomainError : public Error {
public:
    using Error::Error;
};

// A transformed BVP failed one of its construction invariants.
class ConstructionError : public Error {
public:
    using Error::Error;
};

// Caller violated a documented precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

class NoTravellingWaveError : public Error {
public:
    NoTravellingWaveError(const std::string& what, double residual_lo, double residual_hi)
        : Error(what), residual_lo(residual_lo), residual_hi(residual_hi) {}
    double residual_lo;
    double residual_hi;
};

class SingularResidualError : public Error {
public:
    using Error::Error;
};

// Iterative solver (Newton, shooting, root finding) did not converge.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

// ODE integration failed (blow-up, degenerate coefficient, step underflow).
class IntegrationError : public Error {
public:
    IntegrationError(const std::string& what, double at) : Error(what), at(at) {}
    double at;
};

class LocalValidityError : public Error {
public:
    using Error::Error;
};

class ProlongationError : public Error {
public:
    using Error::Error;
};

class ContractError : public Error {
public:
    using Error::Error;
};

class SamplingError : public Error {
public:
    using Error::Error;
};

// Finite-difference stepping errors: CFL violation or front collapse.
class StepError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace stefanlie
