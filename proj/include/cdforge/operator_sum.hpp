#pragma once

#include <vector>

#include "cdforge/local_operator.hpp"
#include "cdforge/state_vector.hpp"

namespace cdforge {

// Sum of geometrically local terms on an open chain. Terms are kept in
// emission order; all accumulations run in ascending term index so results
// are bitwise reproducible.
struct OperatorSum {
  std::vector<LocalOperator> terms;
  int n_sites = 0;
  int local_dim = 2;

  OperatorSum() = default;
  OperatorSum(int n, int d) : n_sites(n), local_dim(d) {}

  void add(LocalOperator op);
  std::size_t size() const { return terms.size(); }
};

// Full dense matrix sum(embed(term, [0, N))); throws ResourceError past the cap.
Matrix materialize(const OperatorSum& sum, Index dense_cap = kDefaultDenseCap);

// out += op applied to the window block of in (state over n_sites sites).
void apply_local_add(const LocalOperator& op, const Vector& in, Vector& out, int n_sites);

// Matrix-free action y = H x, accumulating terms in index order.
Vector apply_sum(const OperatorSum& sum, const Vector& x);

// Sum terms sharing an identical window into one term (canonical window order).
OperatorSum merged_by_window(const OperatorSum& sum);

OperatorSum scaled(const OperatorSum& sum, Complex factor);

}  // namespace cdforge
