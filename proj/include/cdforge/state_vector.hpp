#pragma once

#include "cdforge/errors.hpp"
#include "cdforge/types.hpp"

namespace cdforge {

// Normalized amplitude vector over n_sites sites of uniform local dimension.
struct StateVector {
  Vector amplitudes;
  int n_sites = 0;
  int local_dim = 2;

  StateVector() = default;
  StateVector(Vector amps, int n, int d) : amplitudes(std::move(amps)), n_sites(n), local_dim(d) {
    if (amplitudes.size() != ipow(d, n))
      throw DomainError("StateVector: amplitude length does not match d^N");
  }

  double norm() const { return amplitudes.norm(); }

  void normalize() {
    double n = norm();
    if (n == 0.0) throw SingularStateError("StateVector: cannot normalize zero vector");
    amplitudes /= n;
  }
};

inline Complex overlap(const StateVector& a, const StateVector& b) {
  if (a.amplitudes.size() != b.amplitudes.size())
    throw DomainError("overlap: dimension mismatch");
  return a.amplitudes.dot(b.amplitudes);
}

}  // namespace cdforge
