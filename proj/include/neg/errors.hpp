#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace neg {

struct NegotiationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Exploration exceeded the configured marking budget.
struct BudgetError : NegotiationError {
    using NegotiationError::NegotiationError;
};

/// An operation was called outside its stated precondition
/// (not enabled, classification mismatch, rule guard violation, ...).
struct PreconditionError : NegotiationError {
    using NegotiationError::NegotiationError;
};

/// Replay of an occurrence sequence hit a step that is not enabled.
struct StepError : PreconditionError {
    std::size_t index;
    StepError(std::size_t at, const std::string& what)
        : PreconditionError(what), index(at) {}
};

} // namespace neg
