#pragma once

#include "cdforge/gram.hpp"
#include "cdforge/paths.hpp"

namespace cdforge {

enum class OptimizerKind { Global, Local };

// Sliding windows of fixed width covering [0, N); the last window is clamped
// to the chain end and may be narrower.
struct RegionPlan {
  std::vector<SiteWindow> regions;
  int width = 3;
  int stride = 1;

  static RegionPlan covering(int n_sites, int width = 3, int stride = 1);
};

struct OptimizeResult {
  AnsatzTermSet set;
  RealVector alpha;
  double action = 0.0;    // S(alpha); NaN for the local scheme
  double dh_norm2 = 0.0;  // S(0)
  double residual = 0.0;
  int rank = 0;
  std::vector<std::string> warnings;
};

// Enumerate (tuple-wise for WNC, merged for NC), build the full-chain Gram
// system, and solve.
OptimizeResult optimize_global(const OperatorSum& h, const OperatorSum& dh, int order,
                               AnsatzMode mode, const EnumerationOptions& opts = {});

// Per-region solves over terms fully supported inside each region; tuples
// optimized by several regions get the arithmetic mean of their values.
// Coefficients never assigned by any region are zero (with a warning).
OptimizeResult optimize_local(const OperatorSum& h, const OperatorSum& dh, int order,
                              const RegionPlan& plan, AnsatzMode mode = AnsatzMode::Wnc,
                              const EnumerationOptions& opts = {});

// Convenience wrappers evaluating the path at s.
OptimizeResult optimize_global(const HamiltonianPath& path, double s, int order,
                               AnsatzMode mode, const EnumerationOptions& opts = {});
OptimizeResult optimize_local(const HamiltonianPath& path, double s, int order,
                              const RegionPlan& plan, AnsatzMode mode = AnsatzMode::Wnc,
                              const EnumerationOptions& opts = {});

}  // namespace cdforge
