#pragma once

#include <string>
#include <vector>

#include "cdforge/operator_sum.hpp"

namespace cdforge {

enum class AnsatzMode { Wnc, Nc };

// One nested-commutator direction i [h_{j_{2k-1}}, [..., [h_{j_1}, dh_{j_0}]]].
// The i prefactor is folded into the operator so it is Hermitian and all
// variational coefficients stay real.
struct AnsatzTerm {
  LocalOperator op;
  int order = 1;
  std::vector<int> index_tuple;  // (j0 ... j_{2k-1}); empty for merged pieces
};

struct AnsatzTermSet {
  std::vector<AnsatzTerm> terms;
  std::vector<int> group_of_term;         // term index -> coefficient group
  std::vector<std::string> group_labels;  // stable ids for coefficient dumps
  int group_count = 0;
  int max_order = 0;
  AnsatzMode mode = AnsatzMode::Wnc;
  int n_sites = 0;
  int local_dim = 2;
  // Optional precomputed i[A_g, H] piece lists per group (the even nesting
  // levels fall out of the merged construction); build_gram reuses them.
  std::vector<std::vector<LocalOperator>> c_groups;
};

struct EnumerationOptions {
  // Hard cap on any accumulated window width; exceeding it aborts with
  // ResourceError. Benchmarks that request order l raise it to 2l + 1.
  int max_window_width = 6;
};

inline int window_cap_for_order(int order) {
  return std::max(6, 2 * order + 1);
}

// Breadth-first tuple enumeration of the weighted ansatz up to the given
// order: seeds are dh_{j0}, each level commutes with every overlapping h_j,
// zero commutators are dropped. One coefficient group per tuple. Terms are
// emitted in (order, lexicographic tuple) order and deterministically.
AnsatzTermSet enumerate_terms(const OperatorSum& h, const OperatorSum& dh, int order,
                              const EnumerationOptions& opts = {});

// Same terms, coefficients tied per nesting order (standard NC ansatz).
AnsatzTermSet tie_nc(const AnsatzTermSet& set);

// NC ansatz realized directly from the merged local pieces of the global
// nested commutators i [H, [H, ..., [H, dH]]]; algebraically identical to
// tie_nc(enumerate_terms(...)) but with O(N) pieces per order.
AnsatzTermSet nc_merged_set(const OperatorSum& h, const OperatorSum& dh, int order,
                            const EnumerationOptions& opts = {});

// sum_eta alpha_{group(eta)} A_eta as an operator sum.
OperatorSum assemble(const AnsatzTermSet& set, const RealVector& alpha);

// Spectral solution of the gauge-potential condition for small dense systems:
// <m|A|n> = i <m|dH|n> / (E_n - E_m), zero on near-degenerate pairs.
Matrix exact_agp(const Matrix& h, const Matrix& dh, double gap_tol = 1e-10);

}  // namespace cdforge
