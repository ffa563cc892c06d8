#include "cdforge/trotter.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace cdforge {

long long cnot_cost(int m_qubits) {
  if (m_qubits < 0) throw DomainError("cnot_cost: negative support");
  if (m_qubits == 0) return 0;
  long long p = 1;
  for (int i = 0; i < m_qubits; ++i) p *= 4;
  return (p - 3 * m_qubits - 1 + 3) / 4;
}

namespace {

std::vector<int> window_order(const std::vector<LocalOperator>& terms) {
  std::vector<int> idx(terms.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&terms](int a, int b) {
    return terms[a].window < terms[b].window;
  });
  return idx;
}

// Applies exp(-i tau h) for one local generator and accounts its gate cost.
void apply_term_exponential(const LocalOperator& h, double tau, StateVector& state,
                            TrotterCostReport& report) {
  if (max_norm(h.matrix) < 1e-14) return;
  const int m = tight_support_qubits(h);
  report.support_histogram[m] += 1;
  report.total_cnot += cnot_cost(m);
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix);
  Vector phases(h.dim());
  for (Index i = 0; i < h.dim(); ++i)
    phases(i) = std::exp(Complex(0.0, -tau * es.eigenvalues()(i)));
  LocalOperator u(h.window, h.local_dim,
                  es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint());
  Vector out = Vector::Zero(state.amplitudes.size());
  apply_local_add(u, state.amplitudes, out, state.n_sites);
  state.amplitudes = std::move(out);
}

}  // namespace

TrotterResult trotter_evolve(const HamiltonianPath& path, const EvolutionConfig& config,
                             double tau) {
  if (tau <= 0.0 || config.total_time < tau)
    throw DomainError("trotter_evolve: need tau > 0 and T >= tau");

  const SchedulePlan plan(config.schedule, config.total_time);
  const int n_steps = std::max<long long>(1, std::llround(config.total_time / tau));
  const EnumerationOptions enum_opts{config.ansatz.effective_window_cap()};
  const RegionPlan region_plan =
      config.driver == DriverKind::Cd && config.ansatz.optimizer == OptimizerKind::Local
          ? RegionPlan::covering(path.n_sites(), config.ansatz.region_width,
                                 config.ansatz.region_stride)
          : RegionPlan{};

  StateVector state = path_initial_state(path);
  const StateVector target = path_target_state(path);

  TrotterResult result;
  result.report.n_steps = n_steps;
  result.report.tau = tau;

  for (int k = 1; k <= n_steps; ++k) {
    const ScheduleSample sched = schedule_eval(plan, k * tau);
    OperatorSum ham = path_terms(path, sched.s);
    if (k == 1)
      for (const auto& t : ham.terms)
        result.report.hamiltonian_supports.push_back(tight_support_qubits(t));
    for (int i : window_order(ham.terms))
      apply_term_exponential(ham.terms[i], tau, state, result.report);

    if (config.driver == DriverKind::Cd) {
      OptimizeResult opt =
          config.ansatz.optimizer == OptimizerKind::Global
              ? optimize_global(ham, path_dterms(path, sched.s), config.ansatz.order,
                                config.ansatz.mode, enum_opts)
              : optimize_local(ham, path_dterms(path, sched.s), config.ansatz.order,
                               region_plan, config.ansatz.mode, enum_opts);
      OperatorSum cd = assemble(opt.set, opt.alpha);
      for (auto& term : cd.terms) term.matrix *= sched.s_dot;
      for (int i : window_order(cd.terms))
        apply_term_exponential(cd.terms[i], tau, state, result.report);
    } else if (config.driver == DriverKind::CdExact) {
      throw DomainError("trotter_evolve: exact-AGP driver is not Trotterizable");
    }
    state.normalize();
  }

  result.report.fidelity = fidelity(state, target);
  result.final_state = std::move(state);
  return result;
}

}  // namespace cdforge
