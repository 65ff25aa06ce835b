#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nomalpwa {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration values (non-positive sizes, bad enum names, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Caller misuse: indices out of range, mismatched inputs.
class UsageError : public Error {
public:
    using Error::Error;
};

/// A node could not be placed in any time slot.
class AssignmentError : public Error {
public:
    using Error::Error;
};

/// The power problem has no feasible point even at a zero rate target.
class StructuralInfeasibility : public Error {
public:
    StructuralInfeasibility(std::string what, std::size_t node)
        : Error(std::move(what)), node_(node) {}

    /// Node id (deployment index) that triggered the diagnostic.
    std::size_t node() const noexcept { return node_; }

private:
    std::size_t node_;
};

} // namespace nomalpwa
