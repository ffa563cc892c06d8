#pragma once

#include <map>

#include "cdforge/evolve.hpp"

namespace cdforge {

// CNOT bound for a generic m-qubit unitary: ceil((4^m - 3m - 1) / 4).
long long cnot_cost(int m_qubits);

struct TrotterCostReport {
  int n_steps = 0;
  double tau = 0.0;
  std::vector<int> hamiltonian_supports;       // qubit supports of the H terms, first step
  std::map<int, long long> support_histogram;  // qubit support -> exponential count, all steps
  long long total_cnot = 0;
  double fidelity = 0.0;
};

struct TrotterResult {
  StateVector final_state;
  TrotterCostReport report;
};

// First-order product formula with step tau: at each step k the Hamiltonian
// term exponentials are applied in ascending-window order at s(k tau); for CD
// drivers the per-term ansatz exponentials exp(-i tau s_dot alpha_eta A_eta)
// follow, also ascending. Supports are measured in qubits on the trimmed
// (nontrivially acting) factors; zero generators cost nothing.
TrotterResult trotter_evolve(const HamiltonianPath& path, const EvolutionConfig& config,
                             double tau);

}  // namespace cdforge
