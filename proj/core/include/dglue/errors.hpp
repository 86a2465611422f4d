#pragma once

#include <stdexcept>
#include <string>

namespace dglue {

// Bad input: out-of-range parameters, violated preconditions. CLI exit code 2.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Argument outside the domain of a formula (negative base of a fractional power, x = 0).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Numerical procedure failed: no period found, iteration diverged, iterate left its domain.
// CLI exit code 1.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& block, const std::string& what)
        : std::runtime_error(block + ": " + what), block_(block) {}
    const std::string& block() const noexcept { return block_; }

private:
    std::string block_;
};

// Quadrature or interpolation could not reach the requested accuracy.
class AccuracyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Data handed to an operator outside its contract (e.g. low modes given to the interior extension).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace dglue
