#include "cdforge/ansatz.hpp"

#include <map>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace cdforge {

namespace {

std::string tuple_label(int order, const std::vector<int>& tuple) {
  std::ostringstream os;
  os << "k" << order << ":";
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (i) os << ",";
    os << tuple[i];
  }
  return os.str();
}

void check_inputs(const OperatorSum& h, const OperatorSum& dh, int order) {
  if (order < 1) throw DomainError("ansatz: order must be >= 1");
  if (h.n_sites != dh.n_sites || h.local_dim != dh.local_dim)
    throw DomainError("ansatz: H and dH live on different chains");
}

}  // namespace

AnsatzTermSet enumerate_terms(const OperatorSum& h, const OperatorSum& dh, int order,
                              const EnumerationOptions& opts) {
  check_inputs(h, dh, order);

  struct Node {
    LocalOperator op;  // raw nested commutator, no i prefactor
    std::vector<int> tuple;
  };

  AnsatzTermSet set;
  set.mode = AnsatzMode::Wnc;
  set.max_order = order;
  set.n_sites = h.n_sites;
  set.local_dim = h.local_dim;

  std::vector<Node> frontier;
  frontier.reserve(dh.size());
  for (int j0 = 0; j0 < static_cast<int>(dh.size()); ++j0)
    frontier.push_back({dh.terms[j0], {j0}});

  const int max_depth = 2 * order - 1;
  for (int depth = 1; depth <= max_depth; ++depth) {
    std::vector<Node> next;
    for (const Node& node : frontier) {
      for (int j = 0; j < static_cast<int>(h.size()); ++j) {
        const LocalOperator& hj = h.terms[j];
        if (!node.op.window.overlaps(hj.window)) continue;
        SiteWindow u = join(node.op.window, hj.window);
        if (u.width() > opts.max_window_width)
          throw ResourceError("enumerate_terms: window " + to_string(u) +
                              " exceeds width cap " +
                              std::to_string(opts.max_window_width));
        auto c = commutator_structured(hj, node.op, (depth - 1) % 2 == 1);
        if (!c) continue;
        std::vector<int> tuple = node.tuple;
        tuple.push_back(j);
        next.push_back({std::move(*c), std::move(tuple)});
      }
    }
    if (depth % 2 == 1) {
      const int k = (depth + 1) / 2;
      for (const Node& node : next) {
        LocalOperator op(node.op.window, node.op.local_dim, kI * node.op.matrix);
        set.terms.push_back({std::move(op), k, node.tuple});
      }
    }
    frontier = std::move(next);
  }

  set.group_count = static_cast<int>(set.terms.size());
  set.group_of_term.resize(set.terms.size());
  set.group_labels.resize(set.terms.size());
  for (std::size_t i = 0; i < set.terms.size(); ++i) {
    set.group_of_term[i] = static_cast<int>(i);
    set.group_labels[i] = tuple_label(set.terms[i].order, set.terms[i].index_tuple);
  }
  return set;
}

AnsatzTermSet tie_nc(const AnsatzTermSet& set) {
  if (set.mode != AnsatzMode::Wnc) throw DomainError("tie_nc: input must be in WNC mode");
  AnsatzTermSet out = set;
  out.mode = AnsatzMode::Nc;
  out.group_count = set.max_order;
  out.group_labels.clear();
  for (int k = 1; k <= set.max_order; ++k) out.group_labels.push_back("nc:k" + std::to_string(k));
  for (std::size_t i = 0; i < out.terms.size(); ++i)
    out.group_of_term[i] = out.terms[i].order - 1;
  return out;
}

AnsatzTermSet nc_merged_set(const OperatorSum& h, const OperatorSum& dh, int order,
                            const EnumerationOptions& opts) {
  check_inputs(h, dh, order);

  AnsatzTermSet set;
  set.mode = AnsatzMode::Nc;
  set.max_order = order;
  set.n_sites = h.n_sites;
  set.local_dim = h.local_dim;
  set.group_count = order;
  for (int k = 1; k <= order; ++k) set.group_labels.push_back("nc:k" + std::to_string(k));

  set.c_groups.resize(order);
  std::vector<LocalOperator> level(dh.terms);
  // Odd levels are the ansatz operators; the even level that follows each is
  // exactly i[A_k, H] and is kept for the Gram build.
  for (int depth = 1; depth <= 2 * order; ++depth) {
    std::map<SiteWindow, Matrix> acc;
    for (const LocalOperator& u : level) {
      for (const LocalOperator& hj : h.terms) {
        if (!u.window.overlaps(hj.window)) continue;
        SiteWindow w = join(u.window, hj.window);
        // The width cap governs the ansatz terms (odd depths) only; the
        // even-depth i[A, H] pieces must always be accumulated in full.
        if (depth % 2 == 1 && w.width() > opts.max_window_width)
          throw ResourceError("nc_merged_set: window " + to_string(w) +
                              " exceeds width cap " +
                              std::to_string(opts.max_window_width));
        auto c = commutator_structured(hj, u, (depth - 1) % 2 == 1);
        if (!c) continue;
        auto it = acc.find(w);
        if (it == acc.end())
          acc.emplace(w, std::move(c->matrix));
        else
          it->second += c->matrix;
      }
    }
    level.clear();
    double scale = 0.0;
    for (const auto& [w, m] : acc) scale = std::max(scale, max_norm(m));
    for (auto& [w, m] : acc) {
      if (max_norm(m) < kZeroTol * scale) continue;
      level.emplace_back(w, h.local_dim, std::move(m));
    }
    if (depth % 2 == 1) {
      const int k = (depth + 1) / 2;
      for (const LocalOperator& piece : level)
        set.terms.push_back(
            {LocalOperator(piece.window, piece.local_dim, kI * piece.matrix), k, {}});
    } else {
      set.c_groups[depth / 2 - 1] = level;
    }
  }

  set.group_of_term.resize(set.terms.size());
  for (std::size_t i = 0; i < set.terms.size(); ++i)
    set.group_of_term[i] = set.terms[i].order - 1;
  return set;
}

OperatorSum assemble(const AnsatzTermSet& set, const RealVector& alpha) {
  if (alpha.size() != set.group_count)
    throw DomainError("assemble: coefficient count " + std::to_string(alpha.size()) +
                      " does not match group count " + std::to_string(set.group_count));
  OperatorSum out(set.n_sites, set.local_dim);
  for (std::size_t i = 0; i < set.terms.size(); ++i) {
    const AnsatzTerm& t = set.terms[i];
    out.add(LocalOperator(t.op.window, t.op.local_dim,
                          alpha(set.group_of_term[i]) * t.op.matrix));
  }
  return out;
}

Matrix exact_agp(const Matrix& h, const Matrix& dh, double gap_tol) {
  if (!is_hermitian(h, 1e-10) || !is_hermitian(dh, 1e-10))
    throw DomainError("exact_agp: inputs must be Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const auto& e = es.eigenvalues();
  Matrix dh_eig = es.eigenvectors().adjoint() * dh * es.eigenvectors();
  Matrix a = Matrix::Zero(h.rows(), h.cols());
  for (Index m = 0; m < h.rows(); ++m)
    for (Index n = 0; n < h.cols(); ++n) {
      const double gap = e(n) - e(m);
      if (std::abs(gap) > gap_tol) a(m, n) = kI * dh_eig(m, n) / gap;
    }
  Matrix out = es.eigenvectors() * a * es.eigenvectors().adjoint();
  return 0.5 * (out + out.adjoint().eval());
}

}  // namespace cdforge
