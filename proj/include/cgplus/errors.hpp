#pragma once

#include <stdexcept>
#include <string>

namespace cgplus {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid arguments or violated preconditions.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A computation would exceed its configured memory budget.
class ResourceError : public Error {
public:
    using Error::Error;
};

/// Data that contradicts an invariant the caller promised (e.g. negative
/// residual while peeling weight multiplicities).
class InconsistentData : public Error {
public:
    using Error::Error;
};

/// Malformed or version-mismatched files.
class FormatError : public Error {
public:
    using Error::Error;
};

}  // namespace cgplus
