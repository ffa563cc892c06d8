#include "cdforge/gram.hpp"

#include <map>

#include <Eigen/Eigenvalues>

namespace cdforge {

namespace {

// Gram piece with lazily cached partial-trace reductions, so a wide piece is
// reduced once per distinct intersection window rather than once per pair.
struct ReducedPiece {
  LocalOperator op;
  std::map<SiteWindow, Matrix> cache;

  explicit ReducedPiece(LocalOperator o) : op(std::move(o)) {}

  const Matrix& reduced(const SiteWindow& sub) {
    auto it = cache.find(sub);
    if (it != cache.end()) return it->second;
    return cache.emplace(sub, reduce_to(op, sub).matrix).first->second;
  }
};

// Normalized <p, q>; all Gram pieces are traceless, so disjoint windows
// contribute exactly zero and are skipped by the caller.
Complex piece_inner(ReducedPiece& p, ReducedPiece& q, int local_dim) {
  const SiteWindow isect = *intersect(p.op.window, q.op.window);
  const Matrix& a = p.reduced(isect);
  const Matrix& b = q.reduced(isect);
  Complex t = (a.conjugate().cwiseProduct(b)).sum();
  const int union_sites = p.op.window.width() + q.op.window.width() - isect.width();
  return t / std::pow(static_cast<double>(local_dim), union_sites);
}

double paired_inner(std::vector<ReducedPiece>& a, std::vector<ReducedPiece>& b,
                    int local_dim, double& max_imag) {
  double sum = 0.0;
  for (auto& p : a)
    for (auto& q : b) {
      if (!p.op.window.overlaps(q.op.window)) continue;
      Complex v = piece_inner(p, q, local_dim);
      sum += v.real();
      max_imag = std::max(max_imag, std::abs(v.imag()));
    }
  return sum;
}

}  // namespace

GramSystem build_gram(const AnsatzTermSet& set, const OperatorSum& h,
                      const OperatorSum& dh) {
  if (set.n_sites != h.n_sites || set.local_dim != h.local_dim ||
      h.n_sites != dh.n_sites || h.local_dim != dh.local_dim)
    throw DomainError("build_gram: inconsistent chain geometry");

  const int ng = set.group_count;
  double max_imag = 0.0;

  // C_g = i sum_{eta in g} sum_j [A_eta, h_j], merged per window. Group-level
  // merging is exact by bilinearity of the inner products. Precomputed lists
  // (from the merged construction) are reused when present.
  std::vector<std::vector<ReducedPiece>> c_groups(ng);
  if (!set.c_groups.empty()) {
    if (static_cast<int>(set.c_groups.size()) != ng)
      throw DomainError("build_gram: precomputed C lists do not match group count");
    for (int g = 0; g < ng; ++g)
      for (const auto& piece : set.c_groups[g]) c_groups[g].emplace_back(piece);
  } else {
    std::vector<std::map<SiteWindow, Matrix>> acc(ng);
    for (std::size_t i = 0; i < set.terms.size(); ++i) {
      const AnsatzTerm& t = set.terms[i];
      auto& bucket = acc[set.group_of_term[i]];
      for (const LocalOperator& hj : h.terms) {
        if (!t.op.window.overlaps(hj.window)) continue;
        auto c = commutator_structured(t.op, hj, false);
        if (!c) continue;
        auto it = bucket.find(c->window);
        if (it == bucket.end())
          bucket.emplace(c->window, (kI * c->matrix).eval());
        else
          it->second += kI * c->matrix;
      }
    }
    for (int g = 0; g < ng; ++g)
      for (auto& [w, m] : acc[g])
        c_groups[g].emplace_back(LocalOperator(w, set.local_dim, std::move(m)));
  }

  std::vector<ReducedPiece> dh_pieces;
  for (const auto& t : dh.terms) dh_pieces.emplace_back(t);

  GramSystem out;
  out.g = RealMatrix::Zero(ng, ng);
  out.b = RealVector::Zero(ng);
  for (int g1 = 0; g1 < ng; ++g1) {
    for (int g2 = g1; g2 < ng; ++g2) {
      double v = paired_inner(c_groups[g1], c_groups[g2], set.local_dim, max_imag);
      out.g(g1, g2) = v;
      out.g(g2, g1) = v;
    }
    out.b(g1) = -paired_inner(c_groups[g1], dh_pieces, set.local_dim, max_imag);
  }
  out.dh_norm2 = paired_inner(dh_pieces, dh_pieces, set.local_dim, max_imag);

  if (max_imag > 1e-10)
    throw StructuralError("build_gram: imaginary residue " + std::to_string(max_imag) +
                          " exceeds 1e-10");
  if (ng > 0) {
    const double scale = std::max(out.g.cwiseAbs().maxCoeff(), 1e-300);
    if ((out.g - out.g.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
      throw StructuralError("build_gram: G not symmetric");
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(out.g, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues()(0);
    const double hi = es.eigenvalues()(ng - 1);
    if (lo < -1e-10 * std::max(hi, 1e-300))
      throw StructuralError("build_gram: G not positive semidefinite (min eig " +
                            std::to_string(lo) + ")");
  }
  return out;
}

SolveResult solve(const GramSystem& gram) {
  const Index n = gram.g.rows();
  SolveResult res;
  if (n == 0) {
    res.alpha = RealVector();
    return res;
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(gram.g);
  const RealVector& ev = es.eigenvalues();
  const double cutoff = gram.rcond * std::max(ev(n - 1), 0.0);
  RealVector proj = es.eigenvectors().transpose() * gram.b;
  RealVector alpha = RealVector::Zero(n);
  int rank = 0;
  for (Index i = 0; i < n; ++i) {
    if (ev(i) > cutoff && ev(i) > 0.0) {
      alpha += es.eigenvectors().col(i) * (proj(i) / ev(i));
      ++rank;
    }
  }
  if (rank == 0 && gram.b.cwiseAbs().maxCoeff() > 0.0)
    throw DegenerateSystemError("solve: Gram matrix entirely below cutoff with b != 0");
  res.alpha = std::move(alpha);
  res.rank = rank;
  res.residual = (gram.g * res.alpha - gram.b).norm();
  return res;
}

double action_value(const GramSystem& gram, const RealVector& alpha) {
  if (alpha.size() != gram.g.rows())
    throw DomainError("action_value: coefficient length mismatch");
  return gram.dh_norm2 - 2.0 * alpha.dot(gram.b) + alpha.dot(gram.g * alpha);
}

}  // namespace cdforge
