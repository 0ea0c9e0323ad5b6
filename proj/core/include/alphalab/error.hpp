#pragma once

#include <stdexcept>
#include <string>

namespace alphalab {

// Base of every error the library throws. Callers that only care about
// "user input was bad" vs "library bug" can catch this and InvariantError.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A precondition the caller violated (bad shapes, empty inputs, bad config).
class PreconditionError : public Error {
public:
    using Error::Error;
};

// An internal invariant failed; indicates a bug rather than bad input.
class InvariantError : public Error {
public:
    using Error::Error;
};

}  // namespace alphalab
