#pragma once

#include <functional>

#include "cdforge/errors.hpp"
#include "cdforge/types.hpp"

namespace cdforge {

using MatVec = std::function<Vector(const Vector&)>;

// exp(-i dt H) v for Hermitian H given as a matrix-vector action, via the
// Lanczos subspace with a-posteriori residual control. Deterministic.
Vector krylov_expm_apply(const MatVec& h, const Vector& v, double dt,
                         double tol = 1e-10, int max_dim = 80);

struct EigPair {
  double value = 0.0;
  Vector vector;
  int iterations = 0;
  double residual = 0.0;
};

// Lowest eigenpair of a Hermitian operator, Lanczos with full
// reorthogonalization and a fixed deterministic start vector.
EigPair lanczos_ground_state(const MatVec& h, Index dim, double tol = 1e-11,
                             int max_iter = 600);

// Lowest eigenpair by dense diagonalization.
EigPair dense_ground_state(const Matrix& h);

// exp(-i dt H) v by dense eigendecomposition (H Hermitian).
Vector expm_hermitian_apply(const Matrix& h, double dt, const Vector& v);

}  // namespace cdforge
