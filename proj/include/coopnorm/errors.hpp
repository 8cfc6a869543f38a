#pragma once

#include <stdexcept>
#include <string>

namespace coopnorm {

/// Parameter outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Request exceeds a hard size limit (factorial state spaces).
class CapacityError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Operation called in a configuration it does not support.
class UsageError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A computed result contradicts an internal invariant.
class ConsistencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Output requested from an empty set of records.
class EmptyResultError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace coopnorm
