#pragma once

#include "cdforge/krylov.hpp"
#include "cdforge/optimize.hpp"
#include "cdforge/schedule.hpp"

namespace cdforge {

// CdExact injects the dense spectral gauge potential; it is an oracle driver
// for small systems, not part of the benchmarked ansatz family.
enum class DriverKind { Adiabatic, Cd, CdExact };

struct AnsatzSpec {
  AnsatzMode mode = AnsatzMode::Wnc;
  int order = 1;
  OptimizerKind optimizer = OptimizerKind::Global;
  int region_width = 3;
  int region_stride = 1;
  int window_cap = 0;  // 0: use window_cap_for_order(order)

  int effective_window_cap() const {
    return window_cap > 0 ? window_cap : window_cap_for_order(order);
  }
};

struct EvolutionConfig {
  DriverKind driver = DriverKind::Adiabatic;
  AnsatzSpec ansatz;
  double total_time = 1.0;
  double dt = 0.05;
  double krylov_tol = 1e-10;
  Index dense_cap = kDefaultDenseCap;
  ScheduleKind schedule = ScheduleKind::Sin2Sin2;
  bool record_coefficients = false;
};

struct TracePoint {
  double t = 0.0;
  double s = 0.0;
  double fidelity = 0.0;
  double action = 0.0;  // S(alpha_opt) at the step midpoint; NaN when untracked
};

struct CoefficientRecord {
  double t = 0.0;
  double s = 0.0;
  std::string group;
  double alpha = 0.0;
};

struct EvolutionResult {
  StateVector final_state;
  double fidelity = 0.0;
  std::vector<TracePoint> trace;
  std::vector<CoefficientRecord> coefficients;
  double max_norm_drift = 0.0;  // max |1 - norm| seen before per-step renormalization
};

// |<a|b>|^2, invariant under global phases.
double fidelity(const StateVector& a, const StateVector& b);

// H(s(t)) terms concatenated with the ansatz terms scaled by s_dot(t).
OperatorSum build_hcd(const HamiltonianPath& path, const AnsatzTermSet& set,
                      const RealVector& alpha, double t, const SchedulePlan& plan);

// Midpoint-frozen propagation: each step re-optimizes the coefficients at
// t + dt/2 (CD drivers) and applies exp(-i dt H_CD) by Krylov iteration.
EvolutionResult evolve(const HamiltonianPath& path, const EvolutionConfig& config);

}  // namespace cdforge
