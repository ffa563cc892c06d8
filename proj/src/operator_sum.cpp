#include "cdforge/operator_sum.hpp"

#include <algorithm>
#include <map>

namespace cdforge {

void OperatorSum::add(LocalOperator op) {
  if (op.local_dim != local_dim) throw DomainError("OperatorSum::add: local_dim mismatch");
  if (op.window.lo < 0 || op.window.hi > n_sites)
    throw DomainError("OperatorSum::add: term window " + to_string(op.window) +
                      " outside chain [0," + std::to_string(n_sites) + ")");
  terms.push_back(std::move(op));
}

Matrix materialize(const OperatorSum& sum, Index dense_cap) {
  const Index dim = ipow(sum.local_dim, sum.n_sites);
  if (dim > dense_cap)
    throw ResourceError("materialize: dimension " + std::to_string(dim) +
                        " exceeds cap " + std::to_string(dense_cap));
  Matrix out = Matrix::Zero(dim, dim);
  const SiteWindow full(0, sum.n_sites);
  for (const auto& t : sum.terms) out += embed(t, full).matrix;
  return out;
}

void apply_local_add(const LocalOperator& op, const Vector& in, Vector& out, int n_sites) {
  const Index d = op.local_dim;
  const Index dm = op.dim();
  const Index dr = ipow(d, n_sites - op.window.hi);
  const Index dl = in.size() / (dm * dr);
  using RowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  if (dr < 16 && dl > dr) {
    // Narrow right block: fold it into the operator so the left block forms
    // one large matrix product instead of dl tiny ones.
    Matrix k = Matrix::Zero(dm * dr, dm * dr);
    for (Index m = 0; m < dm; ++m)
      for (Index mp = 0; mp < dm; ++mp) {
        const Complex v = op.matrix(m, mp);
        if (v == Complex(0.0, 0.0)) continue;
        for (Index r = 0; r < dr; ++r) k(m * dr + r, mp * dr + r) = v;
      }
    Eigen::Map<const RowMajor> blk_in(in.data(), dl, dm * dr);
    Eigen::Map<RowMajor> blk_out(out.data(), dl, dm * dr);
    blk_out.noalias() += blk_in * k.transpose();
    return;
  }
  for (Index l = 0; l < dl; ++l) {
    Eigen::Map<const RowMajor> blk_in(in.data() + l * dm * dr, dm, dr);
    Eigen::Map<RowMajor> blk_out(out.data() + l * dm * dr, dm, dr);
    blk_out.noalias() += op.matrix * blk_in;
  }
}

Vector apply_sum(const OperatorSum& sum, const Vector& x) {
  Vector y = Vector::Zero(x.size());
  for (const auto& t : sum.terms) apply_local_add(t, x, y, sum.n_sites);
  return y;
}

OperatorSum merged_by_window(const OperatorSum& sum) {
  std::map<SiteWindow, Matrix> acc;
  for (const auto& t : sum.terms) {
    auto it = acc.find(t.window);
    if (it == acc.end())
      acc.emplace(t.window, t.matrix);
    else
      it->second += t.matrix;
  }
  OperatorSum out(sum.n_sites, sum.local_dim);
  for (auto& [w, m] : acc) out.add(LocalOperator(w, sum.local_dim, std::move(m)));
  return out;
}

OperatorSum scaled(const OperatorSum& sum, Complex factor) {
  OperatorSum out(sum.n_sites, sum.local_dim);
  for (const auto& t : sum.terms)
    out.add(LocalOperator(t.window, t.local_dim, t.matrix * factor));
  return out;
}

}  // namespace cdforge
