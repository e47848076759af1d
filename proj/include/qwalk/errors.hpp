#pragma once

#include <stdexcept>
#include <string>

namespace qwalk {

// Bad input or parameters; the CLI maps this to exit code 2.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Compute-time failure (singular resolvent, non-convergence); exit code 3.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CapacityError : ValidationError {
    using ValidationError::ValidationError;
};

}  // namespace qwalk
