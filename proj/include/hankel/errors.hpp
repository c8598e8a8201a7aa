#pragma once

#include <stdexcept>

namespace hankel {

// A pivot collapsed to zero or below at the current working precision, or an
// automatic precision search hit its cap. Recoverable by increasing the
// fractional-bit budget K.
class precision_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input data (CSV schema, flag combinations).
class schema_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace hankel
