#pragma once

#include <stdexcept>
#include <string>

namespace qpt {

// Bad input shape, unsupported configuration, malformed file.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A mathematical precondition does not hold (non-unit inverse, singular point, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Checked integer arithmetic left the representable range.
class OverflowError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

// An internal invariant failed (e.g. an exact division left a remainder).
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Checkpoint does not belong to the task, or is corrupted.
class CheckpointError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace qpt
