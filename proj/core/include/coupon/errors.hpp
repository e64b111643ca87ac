#pragma once

#include <stdexcept>
#include <string>

namespace coupon {

// Input outside an operation's domain (bad n/m, tolerance out of range, ...).
struct precondition_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Computation could not meet its accuracy contract.
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace coupon
