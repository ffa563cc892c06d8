#pragma once

#include <utility>
#include <vector>

#include "cdforge/errors.hpp"

namespace cdforge {

// Fit of F(N, T) = exp(-kappa(T) N - c(T)) at fixed T: ordinary least squares
// of -ln F against N.
struct ScalingFit {
  double t = 0.0;
  double kappa = 0.0;
  double c = 0.0;
  double residual = 0.0;  // max |fit - data| in -ln F units
  double n_min = 0.0;
  double n_max = 0.0;
  bool kappa_negative = false;  // kappa < -1e-6, flagged rather than clipped
};

// samples: (N, F) pairs, F in (0, 1], at least three of them.
ScalingFit fit_scaling(const std::vector<std::pair<double, double>>& samples, double t);

struct TpPrediction {
  double t_p = 0.0;
  bool monotone_grid = true;  // false when kappa(T) N + c(T) is not decreasing
};

// Root of kappa(T) N + c(T) = -ln f_target by bisection on the piecewise
// linear interpolant in (ln T, ln g). fits must be sorted by T and bracket
// the target.
TpPrediction predict_tp(const std::vector<ScalingFit>& fits, double n_target,
                        double f_target, double rel_tol = 1e-6);

}  // namespace cdforge
