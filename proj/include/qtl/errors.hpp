// errors.hpp - exception types shared across the library
#pragma once

#include <stdexcept>
#include <string>

namespace qtl {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Shape or dimension mismatch between operands.
struct DimensionError : Error {
    using Error::Error;
};

/// Invalid physical parameters or malformed configuration input.
struct ConfigError : Error {
    using Error::Error;
};

/// A numerical precondition failed at run time (non-Hermitian input,
/// negative eigenvalue beyond tolerance, non-convergence).
struct NumericalError : Error {
    using Error::Error;
};

} // namespace qtl
