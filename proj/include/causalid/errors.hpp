#pragma once

#include <stdexcept>
#include <string>

namespace causalid {

/// Thrown when an operation's stated precondition fails on the given data
/// (as opposed to malformed input). The CLI maps this to exit code 3.
struct PreconditionError : std::runtime_error {
    explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace causalid
