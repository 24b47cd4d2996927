#pragma once

#include <stdexcept>
#include <string>

namespace rigidlab {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad parameters, shape/field mismatches, malformed input. CLI exit 2.
struct InvalidArgument : Error {
    using Error::Error;
};

// A configured resource budget would be exceeded. CLI exit 3.
struct BudgetExceeded : Error {
    using Error::Error;
};

// An internal invariant failed; indicates a bug, not user error. CLI exit 4.
struct InternalInvariant : Error {
    using Error::Error;
};

}  // namespace rigidlab
