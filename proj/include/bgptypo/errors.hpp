#pragma once

#include <stdexcept>
#include <string>

namespace bgptypo {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input exceeded the malformed-line budget; the data is not trustworthy.
struct CorruptInputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Operation asked of a path that carries an AS_SET.
struct UnsupportedPathError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Caller broke a documented precondition (e.g. repairing a non-typo verdict).
struct ContractViolation : std::logic_error {
    using std::logic_error::logic_error;
};

} // namespace bgptypo
