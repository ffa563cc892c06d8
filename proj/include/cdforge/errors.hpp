#pragma once

#include <stdexcept>
#include <string>

namespace cdforge {

// Precondition violations (bad windows, mismatched dimensions, out-of-domain arguments).
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A computation would exceed a configured size cap.
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Term lists that should be structurally identical are not.
struct StructuralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Kernel-rank selection found no spectral gap at the requested dimension.
struct DegenerateKernelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Tensor-network contraction produced a numerically zero state.
struct SingularStateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Every Gram eigenvalue fell below the cutoff while b != 0.
struct DegenerateSystemError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Krylov propagation failed to converge within the iteration cap.
struct IntegratorError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Root finding was asked for a value outside the tabulated range.
struct OutOfRangeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cdforge
