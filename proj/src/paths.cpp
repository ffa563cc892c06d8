#include "cdforge/paths.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "cdforge/krylov.hpp"
#include "cdforge/pauli.hpp"

namespace cdforge {

// ---------------------------------------------------------------------------
// Ising path
// ---------------------------------------------------------------------------

OperatorSum ising_terms(const IsingPathSpec& spec, double s) {
  if (spec.n_sites < 1) throw DomainError("ising_terms: n_sites must be >= 1");
  OperatorSum sum(spec.n_sites, 2);
  const Matrix site = (1.0 - s) * spec.h_z * pauli_z() + s * spec.h_x * pauli_x();
  for (int j = 0; j < spec.n_sites; ++j)
    sum.add(LocalOperator(SiteWindow(j, j + 1), 2, site));
  Matrix zz(4, 4);
  zz.setZero();
  zz(0, 0) = 1;
  zz(1, 1) = -1;
  zz(2, 2) = -1;
  zz(3, 3) = 1;
  for (int j = 0; j + 1 < spec.n_sites; ++j)
    sum.add(LocalOperator(SiteWindow(j, j + 2), 2, s * spec.j * zz));
  return sum;
}

OperatorSum ising_dterms(const IsingPathSpec& spec) {
  OperatorSum sum(spec.n_sites, 2);
  const Matrix site = -spec.h_z * pauli_z() + spec.h_x * pauli_x();
  for (int j = 0; j < spec.n_sites; ++j)
    sum.add(LocalOperator(SiteWindow(j, j + 1), 2, site));
  Matrix zz(4, 4);
  zz.setZero();
  zz(0, 0) = 1;
  zz(1, 1) = -1;
  zz(2, 2) = -1;
  zz(3, 3) = 1;
  for (int j = 0; j + 1 < spec.n_sites; ++j)
    sum.add(LocalOperator(SiteWindow(j, j + 2), 2, spec.j * zz));
  return sum;
}

// ---------------------------------------------------------------------------
// MPS family
// ---------------------------------------------------------------------------

Matrix mps_q_matrix(double g) {
  // Rows: physical qudit level i; columns: virtual pair (alpha beta) = 2a+b.
  Matrix q(4, 4);
  q << 0, 0, 1, 1,
       0, 0, 1, g,
       g, g, 0, 0,
       1, g, 0, 0;
  return q;
}

StateVector mps_state(const MpsPathSpec& spec, double s, Index dense_cap) {
  if (spec.n_qudits < 2) throw DomainError("mps_state: n_qudits must be >= 2");
  if (spec.g <= -1.0 || spec.g >= 0.0)
    throw DomainError("mps_state: g must lie in (-1, 0)");
  const Index dim = ipow(4, spec.n_qudits);
  if (dim > dense_cap)
    throw ResourceError("mps_state: dimension exceeds dense cap");

  // Virtual layer: |0> (x) Phi+^(n-1) (x) |0> in qubit order
  // L_0 R_0 L_1 R_1 ... ; each qudit v groups (L_v, R_v).
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  Vector amps = Vector::Zero(dim);
  const Index n_qubits = 2 * spec.n_qudits;
  for (Index idx = 0; idx < dim; ++idx) {
    // Qubit b_k from the most significant side.
    bool nonzero = ((idx >> (n_qubits - 1)) & 1) == 0 && (idx & 1) == 0;
    if (nonzero) {
      // Entangled pair on (R_p, L_{p+1}) = qubits 2p+1, 2p+2.
      for (int p = 0; p + 1 < spec.n_qudits && nonzero; ++p) {
        int a = static_cast<int>((idx >> (n_qubits - 2 - 2 * p)) & 1);
        int b = static_cast<int>((idx >> (n_qubits - 3 - 2 * p)) & 1);
        if (a != b) nonzero = false;
      }
    }
    if (nonzero) amps(idx) = std::pow(inv_sqrt2, spec.n_qudits - 1);
  }

  StateVector state(std::move(amps), spec.n_qudits, 4);
  const Matrix q = s * mps_q_matrix(spec.g) + (1.0 - s) * Matrix::Identity(4, 4);
  for (int v = 0; v < spec.n_qudits; ++v) {
    Vector next = Vector::Zero(dim);
    apply_local_add(LocalOperator(SiteWindow(v, v + 1), 4, q), state.amplitudes, next,
                    spec.n_qudits);
    state.amplitudes = std::move(next);
  }
  if (state.norm() < 1e-12)
    throw SingularStateError("mps_state: contraction produced a numerically zero state");
  state.normalize();
  return state;
}

Matrix reduced_density(const StateVector& state, const SiteWindow& window) {
  const Index d = state.local_dim;
  const Index dm = ipow(d, window.width());
  const Index dr = ipow(d, state.n_sites - window.hi);
  const Index dl = state.amplitudes.size() / (dm * dr);
  using RowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Matrix rho = Matrix::Zero(dm, dm);
  for (Index l = 0; l < dl; ++l) {
    Eigen::Map<const RowMajor> blk(state.amplitudes.data() + l * dm * dr, dm, dr);
    rho.noalias() += blk * blk.adjoint();
  }
  return rho;
}

namespace {

// Projector onto the span of the `kernel_dim` smallest eigenvectors of rho.
Matrix kernel_projector(const Matrix& rho, int kernel_dim, double gap_tol,
                        const std::string& label) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
  const auto& ev = es.eigenvalues();
  const double gap = ev(kernel_dim) - ev(kernel_dim - 1);
  if (gap < gap_tol) {
    std::ostringstream msg;
    msg << "mps_parent_terms: kernel rank " << kernel_dim << " not separated at " << label
        << " (gap " << gap << " < tol " << gap_tol << "); eigenvalues:";
    for (Index i = 0; i < ev.size(); ++i) msg << " " << ev(i);
    throw DegenerateKernelError(msg.str());
  }
  Matrix proj = Matrix::Zero(rho.rows(), rho.cols());
  for (int k = 0; k < kernel_dim; ++k)
    proj.noalias() += es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
  return 0.5 * (proj + proj.adjoint().eval());
}

}  // namespace

OperatorSum mps_parent_terms(const MpsPathSpec& spec, double s, Index dense_cap) {
  const StateVector state = mps_state(spec, s, dense_cap);
  OperatorSum sum(spec.n_qudits, 4);
  for (int v = 0; v + 1 < spec.n_qudits; ++v) {
    SiteWindow w(v, v + 2);
    Matrix rho = reduced_density(state, w);
    // The support rank of an edge block is the product of the bond dimensions
    // cut on either side: 2x2 = 4 in the bulk (kernel 12), but the fixed
    // boundary vectors reduce a chain-end cut to dimension 1 (kernel 14).
    const int d_left = v == 0 ? 1 : 2;
    const int d_right = v + 1 == spec.n_qudits - 1 ? 1 : 2;
    const int kernel_dim = 16 - d_left * d_right;
    sum.add(LocalOperator(w, 4, kernel_projector(rho, kernel_dim, spec.kernel_gap_tol,
                                                 "edge " + to_string(w))));
  }
  for (int v : {0, spec.n_qudits - 1}) {
    SiteWindow w(v, v + 1);
    Matrix rho = reduced_density(state, w);
    // d - D = 2 kernel directions at each boundary qudit.
    sum.add(LocalOperator(w, 4, kernel_projector(rho, 2, spec.kernel_gap_tol,
                                                 "boundary " + to_string(w))));
  }
  return sum;
}

double xi_of_g(double g) {
  if (g <= -1.0 || g >= 0.0) throw DomainError("xi_of_g: g must lie in (-1, 0)");
  return 1.0 / std::log((1.0 - g) / (1.0 + g));
}

double g_of_xi(double xi) {
  if (xi <= 0.0) throw DomainError("g_of_xi: xi must be > 0");
  const double r = std::exp(1.0 / xi);
  return (1.0 - r) / (1.0 + r);
}

// ---------------------------------------------------------------------------
// Unified path interface
// ---------------------------------------------------------------------------

HamiltonianPath HamiltonianPath::make_ising(const IsingPathSpec& spec, double delta_s) {
  HamiltonianPath p;
  p.kind = PathKind::Ising;
  p.ising = spec;
  p.delta_s = delta_s;
  return p;
}

HamiltonianPath HamiltonianPath::make_mps(const MpsPathSpec& spec, double delta_s) {
  HamiltonianPath p;
  p.kind = PathKind::Mps;
  p.mps = spec;
  p.delta_s = delta_s;
  return p;
}

OperatorSum path_terms(const HamiltonianPath& path, double s) {
  if (path.kind == PathKind::Ising) return ising_terms(path.ising, s);
  return mps_parent_terms(path.mps, s, path.dense_cap);
}

OperatorSum dterms_fd(const HamiltonianPath& path, double s, double delta_s) {
  if (delta_s <= 0.0) throw DomainError("dterms_fd: delta_s must be > 0");
  OperatorSum plus = path_terms(path, s + delta_s);
  OperatorSum minus = path_terms(path, s - delta_s);
  if (plus.size() != minus.size())
    throw StructuralError("dterms_fd: term count differs across s +- delta_s");
  OperatorSum out(plus.n_sites, plus.local_dim);
  for (std::size_t i = 0; i < plus.size(); ++i) {
    if (plus.terms[i].window != minus.terms[i].window)
      throw StructuralError("dterms_fd: term window mismatch at index " + std::to_string(i));
    out.add(LocalOperator(plus.terms[i].window, plus.local_dim,
                          (plus.terms[i].matrix - minus.terms[i].matrix) / (2.0 * delta_s)));
  }
  return out;
}

OperatorSum path_dterms(const HamiltonianPath& path, double s) {
  if (path.kind == PathKind::Ising) return ising_dterms(path.ising);
  return dterms_fd(path, s, path.delta_s);
}

namespace {

constexpr Index kDenseDiagThreshold = Index{1} << 12;

StateVector ising_ground_state(const IsingPathSpec& spec, double s, Index dense_cap) {
  OperatorSum h = ising_terms(spec, s);
  const Index dim = ipow(2, spec.n_sites);
  if (dim <= kDenseDiagThreshold) {
    auto pair = dense_ground_state(materialize(h, dense_cap));
    return StateVector(std::move(pair.vector), spec.n_sites, 2);
  }
  auto pair = lanczos_ground_state(
      [&h](const Vector& x) { return apply_sum(h, x); }, dim);
  return StateVector(std::move(pair.vector), spec.n_sites, 2);
}

}  // namespace

StateVector path_initial_state(const HamiltonianPath& path) {
  if (path.kind == PathKind::Ising)
    return ising_ground_state(path.ising, 0.0, path.dense_cap);
  return mps_state(path.mps, 0.0, path.dense_cap);
}

StateVector path_target_state(const HamiltonianPath& path) {
  if (path.kind == PathKind::Ising)
    return ising_ground_state(path.ising, 1.0, path.dense_cap);
  return mps_state(path.mps, 1.0, path.dense_cap);
}

}  // namespace cdforge
