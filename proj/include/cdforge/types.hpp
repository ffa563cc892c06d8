#pragma once

#include <complex>

#include <Eigen/Dense>

namespace cdforge {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr Complex kI{0.0, 1.0};

// Relative max-norm threshold below which operator products are treated as zero.
inline constexpr double kZeroTol = 1e-12;

// Default cap on dense materialization (Hilbert-space dimension).
inline constexpr Index kDefaultDenseCap = Index{1} << 16;

inline Index ipow(Index base, int exp) {
  Index r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace cdforge
