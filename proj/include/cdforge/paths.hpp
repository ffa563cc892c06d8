#pragma once

#include <string>

#include "cdforge/operator_sum.hpp"
#include "cdforge/state_vector.hpp"

namespace cdforge {

// Linear ramp from h_z sum Z_j into the full transverse+longitudinal Ising
// Hamiltonian: H(s) = (1-s) h_z sum Z_j + s (h_x sum X_j + J sum Z_j Z_{j+1}).
struct IsingPathSpec {
  int n_sites = 1;
  double j = 1.0;
  double h_x = 2.0;
  double h_z = 1.0;
};

// N single-site terms followed by N-1 bond terms; bond terms are present
// (possibly zero) at every s so the list structure is s-independent.
OperatorSum ising_terms(const IsingPathSpec& spec, double s);
OperatorSum ising_dterms(const IsingPathSpec& spec);

// Bond-dimension-2 MPS family on n_qudits sites of d = 4 (qubit pairs),
// interpolated through Q_v(s) = s Q_v + (1-s) I from the entangled-pair
// product at s = 0. Dangling virtual qubits are fixed to |0>.
struct MpsPathSpec {
  int n_qudits = 2;
  double g = -0.5;  // in (-1, 0)
  double kernel_gap_tol = 1e-8;
};

// The 4x4 map from a virtual qubit pair to the physical qudit at parameter g.
Matrix mps_q_matrix(double g);

// Exact normalized state of the interpolated family.
StateVector mps_state(const MpsPathSpec& spec, double s, Index dense_cap = kDefaultDenseCap);

// Frustration-free parent Hamiltonian: one rank-12 kernel projector per
// adjacent qudit pair plus rank-2 single-qudit projectors at both ends.
// Kernel ranks are fixed; a closing spectral gap raises DegenerateKernelError.
OperatorSum mps_parent_terms(const MpsPathSpec& spec, double s,
                             Index dense_cap = kDefaultDenseCap);

// Correlation length of the target state, xi = 1 / ln((1-g)/(1+g)), and its
// inverse restricted to the g < 0 branch.
double xi_of_g(double g);
double g_of_xi(double xi);

// Reduced density matrix of the state on a contiguous window.
Matrix reduced_density(const StateVector& state, const SiteWindow& window);

enum class PathKind { Ising, Mps };

struct HamiltonianPath {
  PathKind kind = PathKind::Ising;
  IsingPathSpec ising;
  MpsPathSpec mps;
  double delta_s = 0.01;  // finite-difference step for dterms
  Index dense_cap = kDefaultDenseCap;

  static HamiltonianPath make_ising(const IsingPathSpec& spec, double delta_s = 0.01);
  static HamiltonianPath make_mps(const MpsPathSpec& spec, double delta_s = 0.01);

  int n_sites() const { return kind == PathKind::Ising ? ising.n_sites : mps.n_qudits; }
  int local_dim() const { return kind == PathKind::Ising ? 2 : 4; }
  Index dim() const { return ipow(local_dim(), n_sites()); }
};

OperatorSum path_terms(const HamiltonianPath& path, double s);

// Term-wise central difference (h_j(s+ds) - h_j(s-ds)) / (2 ds); the term
// lists at s +- ds must agree in count and windows.
OperatorSum dterms_fd(const HamiltonianPath& path, double s, double delta_s);

// Analytic derivative for the Ising path, finite difference for the MPS path.
OperatorSum path_dterms(const HamiltonianPath& path, double s);

// Ground states of H(0) and H(1): exact construction for the MPS family,
// diagonalization (dense or Lanczos past 2^12) for the Ising path.
StateVector path_initial_state(const HamiltonianPath& path);
StateVector path_target_state(const HamiltonianPath& path);

}  // namespace cdforge
