#pragma once

#include <stdexcept>
#include <string>

namespace eie {

/// Rejected parameters or evaluation points outside the domain.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Numerical breakdown: non-positive conductivity, ill-conditioning, ...
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Report emission failures.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace eie
