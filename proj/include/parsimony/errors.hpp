#pragma once

#include <stdexcept>
#include <string>

namespace parsimony {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A value lies outside the representable range of a code or parameter.
struct OutOfRange : Error {
    using Error::Error;
};

// A bit stream or serialized artifact cannot be parsed.
struct Malformed : Error {
    using Error::Error;
};

// A probability vector does not sum to one within tolerance.
struct NotNormalized : Error {
    using Error::Error;
};

struct EmptyFeasibleSet : Error {
    using Error::Error;
};

// An iterative solve failed to reach its tolerance.
struct NonConvergence : Error {
    using Error::Error;
};

}  // namespace parsimony
