#pragma once

#include <stdexcept>
#include <string>

namespace ncg {

// Error hierarchy used across the library. Every throwing site names the
// offending quantity in the message so CLI users can locate bad inputs.

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Shape / size mismatch between operands.
struct DimensionError : Error {
    explicit DimensionError(const std::string& msg) : Error(msg) {}
};

// Input outside the mathematical domain of an operation
// (e.g. spectrum of a non-commutative algebra).
struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// A documented precondition was not met (missing operator, wrong flavor...).
struct PreconditionError : Error {
    explicit PreconditionError(const std::string& msg) : Error(msg) {}
};

// Numerical data violates a structural contract (non-Hermitian Dirac,
// non-unitary basis change, failed reconstruction...).
struct ContractViolation : Error {
    explicit ContractViolation(const std::string& msg) : Error(msg) {}
};

// Guard refusals (e.g. oracle dimension cap).
struct RefusalError : Error {
    explicit RefusalError(const std::string& msg) : Error(msg) {}
};

// Malformed or mistyped input documents (CLI exit code 2).
struct SchemaError : Error {
    explicit SchemaError(const std::string& msg) : Error(msg) {}
};

} // namespace ncg
