#include "cdforge/krylov.hpp"

#include <cmath>
#include <cstdint>

#include <Eigen/Eigenvalues>

namespace cdforge {

namespace {

// exp(-i dt T) e1 * scale for real symmetric tridiagonal T.
Vector tridiag_expm_e1(const RealVector& alpha, const RealVector& beta, double dt,
                       double scale) {
  const Index m = alpha.size();
  RealMatrix t = RealMatrix::Zero(m, m);
  for (Index i = 0; i < m; ++i) {
    t(i, i) = alpha(i);
    if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta(i);
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(t);
  Vector phases(m);
  for (Index i = 0; i < m; ++i)
    phases(i) = std::exp(Complex(0.0, -dt * es.eigenvalues()(i)));
  RealVector q1 = es.eigenvectors().row(0).transpose();
  Vector u = es.eigenvectors().cast<Complex>() * (phases.cwiseProduct(q1.cast<Complex>()));
  return u * scale;
}

}  // namespace

Vector krylov_expm_apply(const MatVec& h, const Vector& v, double dt, double tol,
                         int max_dim) {
  const Index dim = v.size();
  const double beta0 = v.norm();
  if (beta0 == 0.0) return v;
  if (dim == 1) {
    Vector hv = h(v);
    double e = (v.dot(hv) / (beta0 * beta0)).real();
    return v * std::exp(Complex(0.0, -dt * e));
  }

  const int m_max = static_cast<int>(std::min<Index>(max_dim, dim));
  Matrix basis(dim, m_max);
  basis.col(0) = v / beta0;
  RealVector alpha(m_max), beta(m_max);

  for (int j = 0; j < m_max; ++j) {
    Vector w = h(basis.col(j));
    alpha(j) = basis.col(j).dot(w).real();
    w -= alpha(j) * basis.col(j);
    if (j > 0) w -= beta(j - 1) * basis.col(j - 1);
    // Two-pass reorthogonalization keeps the basis numerically orthonormal.
    for (int pass = 0; pass < 2; ++pass)
      w -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).adjoint() * w).eval();
    beta(j) = w.norm();

    Vector u = tridiag_expm_e1(alpha.head(j + 1), beta.head(j), dt, beta0);
    const double err = beta(j) * std::abs(u(j));
    const bool breakdown = beta(j) < 1e-14 * beta0;
    if (err <= tol * beta0 || breakdown || j + 1 == static_cast<int>(dim)) {
      return basis.leftCols(j + 1) * u;
    }
    if (j + 1 < m_max) basis.col(j + 1) = w / beta(j);
  }
  throw IntegratorError("krylov_expm_apply: no convergence within " +
                        std::to_string(m_max) + " iterations");
}

EigPair lanczos_ground_state(const MatVec& h, Index dim, double tol, int max_iter) {
  if (dim == 1) {
    Vector v = Vector::Ones(1);
    Vector hv = h(v);
    return {hv(0).real(), v, 1, 0.0};
  }
  const int m_max = static_cast<int>(std::min<Index>(max_iter, dim));
  Matrix basis(dim, m_max);
  {
    // Portable deterministic start (64-bit LCG), fixed across runs.
    std::uint64_t state = 0x9e3779b97f4a7c15ull;
    Vector v0(dim);
    for (Index i = 0; i < dim; ++i) {
      state = state * 6364136223846793005ull + 1442695040888963407ull;
      double x = static_cast<double>(state >> 11) / 9007199254740992.0;  // [0,1)
      v0(i) = Complex(x - 0.5, 0.25);
    }
    basis.col(0) = v0 / v0.norm();
  }
  RealVector alpha(m_max), beta(m_max);
  for (int j = 0; j < m_max; ++j) {
    Vector w = h(basis.col(j));
    alpha(j) = basis.col(j).dot(w).real();
    w -= alpha(j) * basis.col(j);
    if (j > 0) w -= beta(j - 1) * basis.col(j - 1);
    for (int pass = 0; pass < 2; ++pass)
      w -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).adjoint() * w).eval();
    beta(j) = w.norm();

    const int m = j + 1;
    RealMatrix t = RealMatrix::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      t(i, i) = alpha(i);
      if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta(i);
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(t);
    const double theta = es.eigenvalues()(0);
    const double resid = beta(j) * std::abs(es.eigenvectors()(m - 1, 0));
    const bool breakdown = beta(j) < 1e-14;
    if (resid <= tol || breakdown || m == static_cast<int>(dim)) {
      Vector x = basis.leftCols(m) * es.eigenvectors().col(0).cast<Complex>();
      x /= x.norm();
      return {theta, std::move(x), m, resid};
    }
    if (j + 1 < m_max) basis.col(j + 1) = w / beta(j);
  }
  throw IntegratorError("lanczos_ground_state: no convergence within " +
                        std::to_string(m_max) + " iterations");
}

EigPair dense_ground_state(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  return {es.eigenvalues()(0), es.eigenvectors().col(0), 1, 0.0};
}

Vector expm_hermitian_apply(const Matrix& h, double dt, const Vector& v) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  Vector y = es.eigenvectors().adjoint() * v;
  for (Index i = 0; i < y.size(); ++i)
    y(i) *= std::exp(Complex(0.0, -dt * es.eigenvalues()(i)));
  return es.eigenvectors() * y;
}

}  // namespace cdforge
