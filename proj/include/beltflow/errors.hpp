#pragma once

#include <stdexcept>
#include <string>

namespace beltflow {

/// Invalid input: scenario fields, geometry, placements, CLI arguments.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The explicit scheme left its stability region (CFL, positivity).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File could not be opened, parsed or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace beltflow
