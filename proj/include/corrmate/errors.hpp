#pragma once

#include <stdexcept>
#include <string>

namespace corrmate {

// A point outside the domain of definition of a map.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct DegenerateError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct RootFindingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An audit clause failed; the message names the clause.
struct AuditError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace corrmate
