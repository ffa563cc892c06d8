#include "cdforge/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cdforge {

ScalingFit fit_scaling(const std::vector<std::pair<double, double>>& samples, double t) {
  if (samples.size() < 3)
    throw DomainError("fit_scaling: need at least 3 samples");
  double sn = 0, sy = 0, snn = 0, sny = 0;
  for (const auto& [n, f] : samples) {
    if (!(f > 0.0) || f > 1.0)
      throw DomainError("fit_scaling: fidelity " + std::to_string(f) + " outside (0, 1]");
    const double y = -std::log(f);
    sn += n;
    sy += y;
    snn += n * n;
    sny += n * y;
  }
  const double m = static_cast<double>(samples.size());
  const double denom = m * snn - sn * sn;
  if (denom == 0.0) throw DomainError("fit_scaling: degenerate N values");

  ScalingFit fit;
  fit.t = t;
  fit.kappa = (m * sny - sn * sy) / denom;
  fit.c = (sy - fit.kappa * sn) / m;
  fit.kappa_negative = fit.kappa < -1e-6;
  fit.n_min = samples.front().first;
  fit.n_max = samples.front().first;
  for (const auto& [n, f] : samples) {
    fit.n_min = std::min(fit.n_min, n);
    fit.n_max = std::max(fit.n_max, n);
    fit.residual = std::max(fit.residual,
                            std::abs(fit.kappa * n + fit.c - (-std::log(f))));
  }
  return fit;
}

TpPrediction predict_tp(const std::vector<ScalingFit>& fits, double n_target,
                        double f_target, double rel_tol) {
  if (fits.size() < 2) throw DomainError("predict_tp: need at least two fits");
  if (!(f_target > 0.0) || f_target >= 1.0)
    throw DomainError("predict_tp: f_target must lie in (0, 1)");
  for (std::size_t i = 1; i < fits.size(); ++i)
    if (!(fits[i].t > fits[i - 1].t))
      throw DomainError("predict_tp: fits must be sorted by increasing T");

  const double y_target = -std::log(f_target);
  std::vector<double> g(fits.size());
  TpPrediction pred;
  for (std::size_t i = 0; i < fits.size(); ++i) {
    g[i] = fits[i].kappa * n_target + fits[i].c;
    // log-log interpolation needs positive values; clamp and flag.
    if (g[i] <= 0.0) {
      g[i] = 1e-300;
      pred.monotone_grid = false;
    }
    if (i > 0 && g[i] >= g[i - 1]) pred.monotone_grid = false;
  }

  std::size_t seg = fits.size();
  for (std::size_t i = 0; i + 1 < fits.size(); ++i)
    if ((g[i] - y_target) * (g[i + 1] - y_target) <= 0.0) {
      seg = i;
      break;
    }
  if (seg == fits.size())
    throw OutOfRangeError(
        "predict_tp: target -ln F = " + std::to_string(y_target) + " not bracketed; grid spans g(" +
        std::to_string(fits.front().t) + ") = " + std::to_string(g.front()) + " to g(" +
        std::to_string(fits.back().t) + ") = " + std::to_string(g.back()));

  const double x0 = std::log(fits[seg].t), x1 = std::log(fits[seg + 1].t);
  const double l0 = std::log(g[seg]), l1 = std::log(g[seg + 1]);
  auto interp = [&](double x) { return l0 + (x - x0) * (l1 - l0) / (x1 - x0); };
  const double ly = std::log(y_target);

  double lo = x0, hi = x1;
  const bool increasing = l1 > l0;
  while (hi - lo > rel_tol) {
    const double mid = 0.5 * (lo + hi);
    const bool above = interp(mid) > ly;
    if (above == increasing)
      hi = mid;
    else
      lo = mid;
  }
  pred.t_p = std::exp(0.5 * (lo + hi));
  return pred;
}

}  // namespace cdforge
