#pragma once

#include <stdexcept>
#include <string>

namespace qas {

// Error taxonomy shared by the core library and the C API layer.
// Codes are stable: the C API reports them as negative status values.
enum class ErrorCode : int {
    Config = 1,         // bad configuration value or range
    CircuitValidity,    // gate index out of range, malformed circuit edit
    Observable,         // size/Hermiticity mismatch in an expectation
    Resource,           // problem size above the supported cap
    Parse,              // malformed text input
    Sampling,           // degenerate distribution/circuit pair
    ActionApplication,  // stale action applied to a circuit
    Problem,            // problem/circuit mismatch
    DegenerateInstance, // vanishing denominator and friends
    Optimizer,          // optimizer state mismatch
    Internal,           // invariant violation (a bug, not user input)
    Io,                 // file system failure
};

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

} // namespace qas
