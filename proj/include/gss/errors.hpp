// Error taxonomy for the gss library. Each class maps to one failure
// family so the CLI can translate them into stable exit codes.
#pragma once

#include <stdexcept>
#include <string>

namespace gss {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid physical inputs or malformed configuration.
class ParameterError : public Error {
public:
    using Error::Error;
};

// The parameter set violates a validity condition of the reduced model
// (e.g. gamma*h >= 1 degenerates the nondimensionalization).
class ModelValidityError : public Error {
public:
    using Error::Error;
};

// No stable equilibrium point exists; carries which clause failed.
class NoSepError : public Error {
public:
    enum class Clause { MExceedsOne, HExceedsCritical };

    NoSepError(Clause clause, const std::string& what_arg)
        : Error(what_arg), clause_(clause) {}

    Clause clause() const noexcept { return clause_; }

private:
    Clause clause_;
};

// Fault scenario preconditions violated (no pre-fault SEP, bad timing).
class ScenarioError : public Error {
public:
    using Error::Error;
};

// Numerical machinery failed: root bracketing, step-size underflow,
// empty contour extraction.
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace gss
