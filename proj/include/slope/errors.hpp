#pragma once

#include <stdexcept>

namespace slope {

// Error taxonomy shared by the library and the CLI exit-code mapping.

// Invalid parameter value (out-of-range probability, bad index, ...).
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Dimension mismatch between operands.
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Malformed or non-finite input data (files, matrices, missing fields).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An optimality certificate could not be produced or was requested from
// an unconverged solution.
struct CertificateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace slope
