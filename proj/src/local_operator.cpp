#include "cdforge/local_operator.hpp"

#include <cmath>

namespace cdforge {

LocalOperator::LocalOperator(SiteWindow w, int d, Matrix m)
    : window(w), local_dim(d), matrix(std::move(m)) {
  if (local_dim < 2) throw DomainError("LocalOperator: local_dim must be >= 2");
  Index expect = ipow(local_dim, window.width());
  if (matrix.rows() != expect || matrix.cols() != expect)
    throw DomainError("LocalOperator: matrix dimension " + std::to_string(matrix.rows()) +
                      " does not match d^width = " + std::to_string(expect));
}

double max_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

bool is_hermitian(const Matrix& m, double tol) {
  double scale = max_norm(m);
  if (scale == 0.0) return true;
  return max_norm(m - m.adjoint().eval()) < tol * scale;
}

LocalOperator embed(const LocalOperator& a, const SiteWindow& target) {
  if (!target.contains(a.window))
    throw DomainError("embed: target " + to_string(target) + " does not contain " +
                      to_string(a.window));
  if (target == a.window) return a;
  const Index d = a.local_dim;
  const Index dl = ipow(d, a.window.lo - target.lo);
  const Index dm = a.dim();
  const Index dr = ipow(d, target.hi - a.window.hi);
  Matrix out = Matrix::Zero(dl * dm * dr, dl * dm * dr);
  for (Index l = 0; l < dl; ++l)
    for (Index m = 0; m < dm; ++m)
      for (Index mp = 0; mp < dm; ++mp) {
        const Complex v = a.matrix(m, mp);
        if (v == Complex(0.0, 0.0)) continue;
        Index row = (l * dm + m) * dr;
        Index col = (l * dm + mp) * dr;
        for (Index r = 0; r < dr; ++r) out(row + r, col + r) = v;
      }
  return LocalOperator(target, a.local_dim, std::move(out));
}

// The four overlap layouts below contract only over the shared sites, so the
// cost is dim_union^2 * d^overlap rather than a full dense product.
LocalOperator product_on_union(const LocalOperator& a, const LocalOperator& b) {
  if (a.local_dim != b.local_dim)
    throw DomainError("product_on_union: mismatched local_dim");
  if (!a.window.overlaps(b.window))
    throw DomainError("product_on_union: windows must overlap");
  const Index d = a.local_dim;
  const SiteWindow u = join(a.window, b.window);
  const Matrix& A = a.matrix;
  const Matrix& B = b.matrix;

  if (a.window.lo <= b.window.lo && a.window.hi <= b.window.hi &&
      !(a.window.contains(b.window) && a.window != b.window)) {
    // A covers [u.lo, m1), B covers [m0, u.hi); shared block M = [m0, m1).
    const Index dl = ipow(d, b.window.lo - a.window.lo);
    const Index dm = ipow(d, a.window.hi - b.window.lo);
    const Index dr = ipow(d, b.window.hi - a.window.hi);
    Matrix out = Matrix::Zero(dl * dm * dr, dl * dm * dr);
    for (Index l = 0; l < dl; ++l)
      for (Index lp = 0; lp < dl; ++lp) {
        auto ablk = A.block(l * dm, lp * dm, dm, dm);
        auto oblk = out.block(l * dm * dr, lp * dm * dr, dm * dr, dm * dr);
        for (Index m = 0; m < dm; ++m)
          for (Index ms = 0; ms < dm; ++ms) {
            const Complex v = ablk(m, ms);
            if (v == Complex(0.0, 0.0)) continue;
            oblk.middleRows(m * dr, dr) += v * B.middleRows(ms * dr, dr);
          }
      }
    return LocalOperator(u, a.local_dim, std::move(out));
  }

  if (b.window.lo <= a.window.lo && b.window.hi <= a.window.hi &&
      !(b.window.contains(a.window) && a.window != b.window)) {
    // B covers [u.lo, m1), A covers [m0, u.hi).
    const Index dl = ipow(d, a.window.lo - b.window.lo);
    const Index dm = ipow(d, b.window.hi - a.window.lo);
    const Index dr = ipow(d, a.window.hi - b.window.hi);
    Matrix out = Matrix::Zero(dl * dm * dr, dl * dm * dr);
    for (Index l = 0; l < dl; ++l)
      for (Index lp = 0; lp < dl; ++lp) {
        auto bblk = B.block(l * dm, lp * dm, dm, dm);
        auto oblk = out.block(l * dm * dr, lp * dm * dr, dm * dr, dm * dr);
        for (Index mp = 0; mp < dm; ++mp)
          for (Index ms = 0; ms < dm; ++ms) {
            const Complex v = bblk(ms, mp);
            if (v == Complex(0.0, 0.0)) continue;
            oblk.middleCols(mp * dr, dr) += v * A.middleCols(ms * dr, dr);
          }
      }
    return LocalOperator(u, a.local_dim, std::move(out));
  }

  if (a.window.contains(b.window)) {
    // B strictly inside A: out = A * (I (x) B (x) I).
    const Index dm = b.dim();
    const Index dr = ipow(d, a.window.hi - b.window.hi);
    const Index dlmr = a.dim();
    const Index outer = dlmr / (dm * dr);
    Matrix out = Matrix::Zero(dlmr, dlmr);
    for (Index l = 0; l < outer; ++l)
      for (Index mp = 0; mp < dm; ++mp)
        for (Index ms = 0; ms < dm; ++ms) {
          const Complex v = B(ms, mp);
          if (v == Complex(0.0, 0.0)) continue;
          out.middleCols(l * dm * dr + mp * dr, dr) +=
              v * A.middleCols(l * dm * dr + ms * dr, dr);
        }
    return LocalOperator(u, a.local_dim, std::move(out));
  }

  // A strictly inside B: out = (I (x) A (x) I) * B.
  const Index dm = a.dim();
  const Index dr = ipow(d, b.window.hi - a.window.hi);
  const Index dlmr = b.dim();
  const Index outer = dlmr / (dm * dr);
  Matrix out = Matrix::Zero(dlmr, dlmr);
  for (Index l = 0; l < outer; ++l)
    for (Index m = 0; m < dm; ++m)
      for (Index ms = 0; ms < dm; ++ms) {
        const Complex v = A(m, ms);
        if (v == Complex(0.0, 0.0)) continue;
        out.middleRows(l * dm * dr + m * dr, dr) +=
            v * B.middleRows(l * dm * dr + ms * dr, dr);
      }
  return LocalOperator(u, a.local_dim, std::move(out));
}

std::optional<LocalOperator> commutator(const LocalOperator& a, const LocalOperator& b) {
  if (a.local_dim != b.local_dim)
    throw DomainError("commutator: mismatched local_dim");
  if (!a.window.overlaps(b.window)) return std::nullopt;
  LocalOperator ab = product_on_union(a, b);
  LocalOperator ba = product_on_union(b, a);
  ab.matrix -= ba.matrix;
  if (max_norm(ab.matrix) < kZeroTol * max_norm(a.matrix) * max_norm(b.matrix))
    return std::nullopt;
  return ab;
}

std::optional<LocalOperator> commutator_structured(const LocalOperator& a,
                                                   const LocalOperator& b,
                                                   bool b_antihermitian) {
  if (a.local_dim != b.local_dim)
    throw DomainError("commutator_structured: mismatched local_dim");
  if (!a.window.overlaps(b.window)) return std::nullopt;
  // For Hermitian a: (ab)^dag = b^dag a = -+ ba, so ba never needs computing.
  LocalOperator ab = product_on_union(a, b);
  if (b_antihermitian)
    ab.matrix += ab.matrix.adjoint().eval();
  else
    ab.matrix -= ab.matrix.adjoint().eval();
  if (max_norm(ab.matrix) < kZeroTol * max_norm(a.matrix) * max_norm(b.matrix))
    return std::nullopt;
  return ab;
}

Matrix partial_trace_left(const Matrix& m, Index d_left) {
  const Index sub = m.rows() / d_left;
  Matrix out = Matrix::Zero(sub, sub);
  for (Index l = 0; l < d_left; ++l) out += m.block(l * sub, l * sub, sub, sub);
  return out;
}

Matrix partial_trace_right(const Matrix& m, Index d_right) {
  // Streams the source column by column so each strided gather stays inside
  // one cached column.
  const Index sub = m.rows() / d_right;
  Matrix out = Matrix::Zero(sub, sub);
  using StridedVec = Eigen::Map<const Vector, 0, Eigen::InnerStride<Eigen::Dynamic>>;
  for (Index j = 0; j < sub; ++j)
    for (Index r = 0; r < d_right; ++r)
      out.col(j) += StridedVec(m.data() + (j * d_right + r) * m.rows() + r, sub,
                               Eigen::InnerStride<Eigen::Dynamic>(d_right));
  return out;
}

LocalOperator reduce_to(const LocalOperator& a, const SiteWindow& sub) {
  if (!a.window.contains(sub)) throw DomainError("reduce_to: sub not contained in window");
  const Index d = a.local_dim;
  Matrix m = a.matrix;
  if (sub.lo > a.window.lo) m = partial_trace_left(m, ipow(d, sub.lo - a.window.lo));
  if (sub.hi < a.window.hi) m = partial_trace_right(m, ipow(d, a.window.hi - sub.hi));
  return LocalOperator(sub, a.local_dim, std::move(m));
}

Complex hs_inner(const LocalOperator& a, const LocalOperator& b) {
  if (a.local_dim != b.local_dim)
    throw DomainError("hs_inner: mismatched local_dim");
  const double d = static_cast<double>(a.local_dim);
  auto isect = intersect(a.window, b.window);
  if (!isect) {
    // Disjoint supports factorize into normalized single-operator traces.
    Complex ta = a.matrix.trace() / std::pow(d, a.window.width());
    Complex tb = b.matrix.trace() / std::pow(d, b.window.width());
    return std::conj(ta) * tb;
  }
  if (a.window == b.window) {
    Complex t = (a.matrix.conjugate().cwiseProduct(b.matrix)).sum();
    return t / std::pow(d, a.window.width());
  }
  LocalOperator ra = reduce_to(a, *isect);
  LocalOperator rb = reduce_to(b, *isect);
  Complex t = (ra.matrix.conjugate().cwiseProduct(rb.matrix)).sum();
  int union_sites = a.window.width() + b.window.width() - isect->width();
  return t / std::pow(d, union_sites);
}

int tight_support_qubits(const LocalOperator& a, double tol) {
  int qubits_per_site = 0;
  for (int d = a.local_dim; d > 1; d /= 2) {
    if (d % 2 != 0) throw DomainError("tight_support_qubits: local_dim not a power of two");
    ++qubits_per_site;
  }
  const int nq = a.window.width() * qubits_per_site;
  const double scale = max_norm(a.matrix);
  if (scale == 0.0) return 0;
  int support = 0;
  for (int q = 0; q < nq; ++q) {
    const Index dy = Index{1} << (nq - q - 1);
    const Index dl = a.dim() / (2 * dy);
    // R = (1/2) Tr_q(a); trivial on q iff a == I_q (x) R.
    double err = 0.0;
    for (Index l = 0; l < dl; ++l)
      for (Index lp = 0; lp < dl; ++lp)
        for (Index y = 0; y < dy; ++y)
          for (Index yp = 0; yp < dy; ++yp) {
            const Complex m00 = a.matrix((l * 2 + 0) * dy + y, (lp * 2 + 0) * dy + yp);
            const Complex m11 = a.matrix((l * 2 + 1) * dy + y, (lp * 2 + 1) * dy + yp);
            const Complex m01 = a.matrix((l * 2 + 0) * dy + y, (lp * 2 + 1) * dy + yp);
            const Complex m10 = a.matrix((l * 2 + 1) * dy + y, (lp * 2 + 0) * dy + yp);
            const Complex r = 0.5 * (m00 + m11);
            err = std::max({err, std::abs(m00 - r), std::abs(m11 - r), std::abs(m01),
                            std::abs(m10)});
          }
    if (err > tol * scale) ++support;
  }
  return support;
}

}  // namespace cdforge
