#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cstring>
#include <set>

#include "cdforge/ansatz.hpp"
#include "cdforge/paths.hpp"
#include "cdforge/pauli.hpp"
#include "oracles.hpp"

using namespace cdforge;

namespace {

AnsatzTermSet ising_wnc(int n, int order, double s) {
  IsingPathSpec spec;
  spec.n_sites = n;
  return enumerate_terms(ising_terms(spec, s), ising_dterms(spec), order,
                         {window_cap_for_order(order)});
}

// Rank of the span of vectorized operators embedded on the full chain.
int span_rank(const std::vector<Matrix>& ops) {
  if (ops.empty()) return 0;
  Matrix stacked(ops.size(), ops[0].size());
  for (std::size_t i = 0; i < ops.size(); ++i)
    stacked.row(i) = Eigen::Map<const Vector>(ops[i].data(), ops[i].size()).transpose();
  Eigen::ColPivHouseholderQR<Matrix> qr(stacked);
  qr.setThreshold(1e-10);
  return static_cast<int>(qr.rank());
}

}  // namespace

TEST_CASE("first-order terms span exactly {Y_j, Y_j Z_j+1, Z_j Y_j+1}") {
  const int n = 4;
  AnsatzTermSet set = ising_wnc(n, 1, 0.6);
  std::vector<Matrix> got;
  for (const auto& t : set.terms) got.push_back(oracle::embed_full(t.op, n));

  std::vector<Matrix> basis;
  OperatorSum span(n, 2);
  for (int j = 0; j < n; ++j)
    basis.push_back(oracle::embed_full(LocalOperator(SiteWindow(j, j + 1), 2, pauli_y()), n));
  for (int j = 0; j + 1 < n; ++j) {
    basis.push_back(oracle::embed_full(
        LocalOperator(SiteWindow(j, j + 2), 2, oracle::kron(pauli_y(), pauli_z())), n));
    basis.push_back(oracle::embed_full(
        LocalOperator(SiteWindow(j, j + 2), 2, oracle::kron(pauli_z(), pauli_y())), n));
  }
  const int rank_basis = span_rank(basis);
  CHECK(rank_basis == 3 * n - 2);
  CHECK(span_rank(got) == rank_basis);
  std::vector<Matrix> joint = got;
  joint.insert(joint.end(), basis.begin(), basis.end());
  CHECK(span_rank(joint) == rank_basis);  // same span, both directions
}

TEST_CASE("single site with J=0 yields one direction proportional to Y") {
  IsingPathSpec spec;
  spec.n_sites = 1;
  spec.j = 0.0;
  AnsatzTermSet set =
      enumerate_terms(ising_terms(spec, 0.4), ising_dterms(spec), 1, {6});
  REQUIRE(set.terms.size() == 1);
  Matrix op = set.terms[0].op.matrix;
  Complex c = op(0, 1) / pauli_y()(0, 1);
  CHECK(max_norm(op - c * pauli_y()) < 1e-12);
  CHECK(std::abs(c.imag()) < 1e-12);
}

TEST_CASE("every term is Hermitian with the window equal to its constituents' union") {
  AnsatzTermSet set = ising_wnc(5, 2, 0.3);
  IsingPathSpec spec;
  spec.n_sites = 5;
  OperatorSum h = ising_terms(spec, 0.3);
  OperatorSum dh = ising_dterms(spec);
  for (const auto& t : set.terms) {
    CHECK(is_hermitian(t.op.matrix, 1e-12));
    SiteWindow u = dh.terms[t.index_tuple[0]].window;
    for (std::size_t i = 1; i < t.index_tuple.size(); ++i)
      u = join(u, h.terms[t.index_tuple[i]].window);
    CHECK(t.op.window == u);
  }
}

TEST_CASE("tuples with disjoint constituents never appear") {
  AnsatzTermSet set = ising_wnc(6, 2, 0.5);
  IsingPathSpec spec;
  spec.n_sites = 6;
  OperatorSum h = ising_terms(spec, 0.5);
  OperatorSum dh = ising_dterms(spec);
  for (const auto& t : set.terms) {
    SiteWindow acc = dh.terms[t.index_tuple[0]].window;
    for (std::size_t i = 1; i < t.index_tuple.size(); ++i) {
      const SiteWindow& hw = h.terms[t.index_tuple[i]].window;
      CHECK(acc.overlaps(hw));
      acc = join(acc, hw);
    }
  }
}

TEST_CASE("term count grows affinely in N at fixed order") {
  auto count = [](int n) { return ising_wnc(n, 1, 0.45).terms.size(); };
  const auto c4 = count(4), c8 = count(8), c12 = count(12);
  CHECK(c8 - c4 == c12 - c8);  // exactly linear on the chain
  CHECK(c8 > c4);
}

TEST_CASE("enumeration is deterministic") {
  AnsatzTermSet a = ising_wnc(5, 2, 0.3);
  AnsatzTermSet b = ising_wnc(5, 2, 0.3);
  REQUIRE(a.terms.size() == b.terms.size());
  for (std::size_t i = 0; i < a.terms.size(); ++i) {
    CHECK(a.terms[i].index_tuple == b.terms[i].index_tuple);
    CHECK(std::memcmp(a.terms[i].op.matrix.data(), b.terms[i].op.matrix.data(),
                      sizeof(Complex) * a.terms[i].op.matrix.size()) == 0);
  }
}

TEST_CASE("terms are emitted in (order, lexicographic tuple) order") {
  AnsatzTermSet set = ising_wnc(4, 2, 0.3);
  for (std::size_t i = 1; i < set.terms.size(); ++i) {
    const auto& a = set.terms[i - 1];
    const auto& b = set.terms[i];
    CHECK((a.order < b.order || (a.order == b.order && a.index_tuple <= b.index_tuple)));
  }
}

TEST_CASE("window cap aborts enumeration with a resource error") {
  IsingPathSpec spec;
  spec.n_sites = 6;
  CHECK_THROWS_AS(
      enumerate_terms(ising_terms(spec, 0.5), ising_dterms(spec), 2, {3}),
      ResourceError);
}

TEST_CASE("NC grouping: order sums equal dense global nested commutators") {
  IsingPathSpec spec;
  spec.n_sites = 4;
  const double s = 0.6;
  OperatorSum h = ising_terms(spec, s);
  OperatorSum dh = ising_dterms(spec);
  Matrix hd = materialize(h), dhd = materialize(dh);

  AnsatzTermSet nc = tie_nc(enumerate_terms(h, dh, 2, {window_cap_for_order(2)}));
  CHECK(nc.group_count == 2);
  for (int k = 1; k <= 2; ++k) {
    Matrix sum = Matrix::Zero(hd.rows(), hd.cols());
    for (std::size_t i = 0; i < nc.terms.size(); ++i)
      if (nc.terms[i].order == k) sum += oracle::embed_full(nc.terms[i].op, spec.n_sites);
    Matrix expect = oracle::nested_commutator(hd, dhd, k);
    CHECK(max_norm(sum - expect) < (k == 1 ? 1e-10 : 1e-9));
  }
}

TEST_CASE("merged NC realization equals the tied tuple enumeration") {
  IsingPathSpec spec;
  spec.n_sites = 4;
  const double s = 0.35;
  OperatorSum h = ising_terms(spec, s);
  OperatorSum dh = ising_dterms(spec);
  AnsatzTermSet tied = tie_nc(enumerate_terms(h, dh, 3, {window_cap_for_order(3)}));
  AnsatzTermSet merged = nc_merged_set(h, dh, 3, {window_cap_for_order(3)});
  CHECK(merged.group_count == 3);
  for (int k = 1; k <= 3; ++k) {
    Matrix a = Matrix::Zero(16, 16), b = Matrix::Zero(16, 16);
    for (const auto& t : tied.terms)
      if (t.order == k) a += oracle::embed_full(t.op, 4);
    for (const auto& t : merged.terms)
      if (t.order == k) b += oracle::embed_full(t.op, 4);
    CHECK(max_norm(a - b) < 1e-9);
  }
}

TEST_CASE("assemble: zero coefficients, scaling, and NC/WNC consistency") {
  AnsatzTermSet set = ising_wnc(3, 1, 0.5);
  RealVector zero = RealVector::Zero(set.group_count);
  CHECK(max_norm(materialize(assemble(set, zero), 1 << 10)) < 1e-15);

  AnsatzTermSet one = ising_wnc(1, 1, 0.5);
  // J=0 not needed: N=1 has a single site term and a single tuple.
  IsingPathSpec s1;
  s1.n_sites = 1;
  one = enumerate_terms(ising_terms(s1, 0.5), ising_dterms(s1), 1, {6});
  REQUIRE(one.group_count == 1);
  RealVector two(1);
  two << 2.0;
  Matrix doubled = materialize(assemble(one, two), 4);
  CHECK(max_norm(doubled - 2.0 * oracle::embed_full(one.terms[0].op, 1)) < 1e-14);

  // Tying coefficients per order reproduces the identical operator.
  AnsatzTermSet wnc = ising_wnc(4, 2, 0.5);
  AnsatzTermSet nc = tie_nc(wnc);
  RealVector alpha_nc(2);
  alpha_nc << 0.7, -0.2;
  RealVector alpha_wnc(wnc.group_count);
  for (std::size_t i = 0; i < wnc.terms.size(); ++i)
    alpha_wnc(static_cast<int>(i)) = alpha_nc(wnc.terms[i].order - 1);
  Matrix a = materialize(assemble(wnc, alpha_wnc));
  Matrix b = materialize(assemble(nc, alpha_nc));
  CHECK(max_norm(a - b) < 1e-12);

  RealVector bad(3);
  CHECK_THROWS_AS(assemble(nc, bad), DomainError);
}

TEST_CASE("exact gauge potential: closed form on one qubit") {
  IsingPathSpec spec;
  spec.n_sites = 1;
  spec.j = 0.0;
  for (double s : {0.1, 0.5, 0.9}) {
    Matrix h = materialize(ising_terms(spec, s));
    Matrix dh = materialize(ising_dterms(spec));
    Matrix a = exact_agp(h, dh);
    Matrix expect = oracle::two_level_agp_coeff(s, spec.h_x, spec.h_z) * pauli_y();
    CHECK(max_norm(a - expect) < 1e-12);
  }
}

TEST_CASE("exact gauge potential vanishes when dH = H") {
  oracle::Rng rng;
  Matrix h = rng.hermitian(8);
  CHECK(max_norm(exact_agp(h, h)) < 1e-10);
}

TEST_CASE("exact gauge potential satisfies the transport condition") {
  IsingPathSpec spec;
  spec.n_sites = 3;
  const double s = 0.4;
  Matrix h = materialize(ising_terms(spec, s));
  Matrix dh = materialize(ising_dterms(spec));
  Matrix a = exact_agp(h, dh);
  CHECK(is_hermitian(a, 1e-10));
  // Residual projected off near-degenerate pairs in the eigenbasis.
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  Matrix resid = dh + kI * (a * h - h * a);
  Matrix in_eig = es.eigenvectors().adjoint() * resid * es.eigenvectors();
  for (Index m = 0; m < in_eig.rows(); ++m)
    for (Index n = 0; n < in_eig.cols(); ++n)
      if (std::abs(es.eigenvalues()(n) - es.eigenvalues()(m)) <= 1e-10)
        in_eig(m, n) = 0.0;
  CHECK(max_norm(in_eig) < 1e-8);
}

TEST_CASE("exact gauge potential rejects non-Hermitian input") {
  oracle::Rng rng;
  Matrix h = rng.matrix(4);
  CHECK_THROWS_AS(exact_agp(h, h), DomainError);
}
