#pragma once

#include <optional>

#include "cdforge/site_window.hpp"
#include "cdforge/types.hpp"

namespace cdforge {

// Dense operator supported on a contiguous site window of a chain with
// uniform local dimension. The matrix dimension is local_dim^window.width();
// basis ordering puts the leftmost site in the most significant digit.
struct LocalOperator {
  SiteWindow window;
  int local_dim = 2;
  Matrix matrix;

  LocalOperator() = default;
  LocalOperator(SiteWindow w, int d, Matrix m);

  Index dim() const { return matrix.rows(); }
};

double max_norm(const Matrix& m);
bool is_hermitian(const Matrix& m, double tol = 1e-12);

// I (x) a (x) I on the target window; target must contain a.window.
LocalOperator embed(const LocalOperator& a, const SiteWindow& target);

// a * b on join(a.window, b.window) for overlapping windows, contracting
// only over the shared sites (never materializes wider intermediates).
LocalOperator product_on_union(const LocalOperator& a, const LocalOperator& b);

// [a, b], or nullopt when the windows are disjoint or the result is zero
// below kZeroTol * |a| * |b| in max norm.
std::optional<LocalOperator> commutator(const LocalOperator& a, const LocalOperator& b);

// [a, b] for Hermitian a and (anti-)Hermitian b via a single product:
// ab -+ (ab)^dag. Same contract as commutator.
std::optional<LocalOperator> commutator_structured(const LocalOperator& a,
                                                   const LocalOperator& b,
                                                   bool b_antihermitian);

// Normalized Hilbert-Schmidt inner product  d^{-|Wa u Wb|} Tr(embed(a)^dag embed(b)),
// conjugate-linear in the first argument. Independent of any common window
// enlargement, so pieces can be paired without a global embedding.
Complex hs_inner(const LocalOperator& a, const LocalOperator& b);

// Partial trace over the first (leftmost) block of dimension d_left.
Matrix partial_trace_left(const Matrix& m, Index d_left);
// Partial trace over the last (rightmost) block of dimension d_right.
Matrix partial_trace_right(const Matrix& m, Index d_right);

// Partial trace of a down to sub (must be contained in a.window).
LocalOperator reduce_to(const LocalOperator& a, const SiteWindow& sub);

// Number of qubits the operator acts on nontrivially. local_dim must be a
// power of two; a d=4 site counts as two qubits, each tested separately.
int tight_support_qubits(const LocalOperator& a, double tol = 1e-12);

}  // namespace cdforge
