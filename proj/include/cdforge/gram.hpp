#pragma once

#include "cdforge/ansatz.hpp"

namespace cdforge {

// Normal equations of the least-action fit, in normalized-trace units:
// G_{gg'} = <C_g, C_g'>, b_g = -<C_g, dH>, with C_g = i [A_g, H] accumulated
// per coefficient group.
struct GramSystem {
  RealMatrix g;
  RealVector b;
  double dh_norm2 = 0.0;
  double rcond = 1e-10;
};

GramSystem build_gram(const AnsatzTermSet& set, const OperatorSum& h,
                      const OperatorSum& dh);

struct SolveResult {
  RealVector alpha;
  double residual = 0.0;  // ||G alpha - b||_2
  int rank = 0;           // retained spectral directions
};

// Minimum-norm least squares through the eigendecomposition of G, discarding
// eigenvalues below rcond * lambda_max.
SolveResult solve(const GramSystem& gram);

// S(alpha) = ||dH||^2 - 2 alpha.b + alpha.G alpha.
double action_value(const GramSystem& gram, const RealVector& alpha);

}  // namespace cdforge
