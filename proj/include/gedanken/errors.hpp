#pragma once

#include <stdexcept>
#include <string>

namespace gedanken {

// Bad input from the caller. The CLI maps every subclass to exit code 2.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ValidationError : public InputError {
public:
    using InputError::InputError;
};

// Unknown, missing, or colliding subsystem labels; register shape mismatch.
class LabelError : public InputError {
public:
    using InputError::InputError;
};

// Requests with no meaningful answer (empty keep set, zero qubits, coincident events).
class DegenerateError : public InputError {
public:
    using InputError::InputError;
};

// A resource state that is not maximally entangled has no correction table.
class EntanglementError : public InputError {
public:
    using InputError::InputError;
};

// A sender-side operation touching receiver-side labels.
class LocalityError : public InputError {
public:
    using InputError::InputError;
};

// The simulation produced a result that contradicts quantum mechanics or
// kinematics. Always a bug; the CLI maps it to exit code 3.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace gedanken
