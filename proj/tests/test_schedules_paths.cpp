#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "cdforge/paths.hpp"
#include "cdforge/pauli.hpp"
#include "cdforge/schedule.hpp"
#include "oracles.hpp"

using namespace cdforge;

// ---------------------------------------------------------------------------
// Schedules
// ---------------------------------------------------------------------------

TEST_CASE("schedule endpoints: s(0)=0, s(T)=1, flat derivatives") {
  for (auto kind : {ScheduleKind::Sin2, ScheduleKind::Sin2Sin2}) {
    SchedulePlan plan(kind, 3.7);
    auto a = schedule_eval(plan, 0.0);
    auto b = schedule_eval(plan, plan.total_time);
    CHECK(std::abs(a.s) < 1e-14);
    CHECK(std::abs(a.s_dot) < 1e-14);
    CHECK(std::abs(b.s - 1.0) < 1e-14);
    CHECK(std::abs(b.s_dot) < 1e-14);
  }
}

TEST_CASE("sin2sin2 midpoint value is exactly one half") {
  SchedulePlan plan(ScheduleKind::Sin2Sin2, 2.0);
  CHECK(schedule_eval(plan, 1.0).s == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("schedule derivative matches a central finite difference") {
  for (auto kind : {ScheduleKind::Sin2, ScheduleKind::Sin2Sin2}) {
    SchedulePlan plan(kind, 1.3);
    for (double t : {0.2, 0.5, 0.9, 1.1}) {
      const double eps = 1e-6;
      double fd = (schedule_eval(plan, t + eps).s - schedule_eval(plan, t - eps).s) / (2 * eps);
      CHECK(schedule_eval(plan, t).s_dot == doctest::Approx(fd).epsilon(1e-7));
    }
  }
}

TEST_CASE("schedule is monotone on a 1000-point grid") {
  for (auto kind : {ScheduleKind::Sin2, ScheduleKind::Sin2Sin2}) {
    SchedulePlan plan(kind, 1.0);
    double prev = -1.0;
    for (int i = 0; i <= 1000; ++i) {
      double s = schedule_eval(plan, i / 1000.0).s;
      CHECK(s >= prev);
      prev = s;
    }
  }
}

TEST_CASE("schedule rejects times outside [0, T]") {
  SchedulePlan plan(ScheduleKind::Sin2, 1.0);
  CHECK_THROWS_AS(schedule_eval(plan, -0.1), DomainError);
  CHECK_THROWS_AS(schedule_eval(plan, 1.1), DomainError);
}

// ---------------------------------------------------------------------------
// Ising path
// ---------------------------------------------------------------------------

TEST_CASE("ising terms at s=0 materialize to a diagonal matrix") {
  IsingPathSpec spec;
  spec.n_sites = 3;
  Matrix h = materialize(ising_terms(spec, 0.0));
  Matrix off = h - Matrix(h.diagonal().asDiagonal());
  CHECK(max_norm(off) < 1e-15);
  Matrix expect = spec.h_z * oracle::dense_sum([&] {
    OperatorSum z(3, 2);
    for (int j = 0; j < 3; ++j) z.add(LocalOperator(SiteWindow(j, j + 1), 2, pauli_z()));
    return z;
  }());
  CHECK(max_norm(h - expect) < 1e-14);
}

TEST_CASE("ising terms at s=1, N=2 match the dense oracle") {
  // The ramp scales the longitudinal field by (1-s), so at s=1 only the
  // transverse and coupling pieces survive.
  IsingPathSpec spec;
  spec.n_sites = 2;
  Matrix h = materialize(ising_terms(spec, 1.0));
  Matrix expect =
      spec.h_x * (oracle::kron(pauli_x(), Matrix::Identity(2, 2)) +
                  oracle::kron(Matrix::Identity(2, 2), pauli_x())) +
      spec.j * oracle::kron(pauli_z(), pauli_z());
  CHECK(max_norm(h - expect) < 1e-14);
  Matrix mid = materialize(ising_terms(spec, 0.5));
  CHECK(max_norm(mid - oracle::dense_sum(ising_terms(spec, 0.5))) < 1e-14);
}

TEST_CASE("ising terms at s=0.5, N=2 carry the documented coefficients") {
  IsingPathSpec spec;
  spec.n_sites = 2;
  OperatorSum h = ising_terms(spec, 0.5);
  REQUIRE(h.size() == 3);
  CHECK(max_norm(h.terms[0].matrix - (0.5 * pauli_z() + 1.0 * pauli_x())) < 1e-15);
  CHECK(max_norm(h.terms[1].matrix - (0.5 * pauli_z() + 1.0 * pauli_x())) < 1e-15);
  CHECK(max_norm(h.terms[2].matrix - 0.5 * oracle::kron(pauli_z(), pauli_z())) < 1e-15);
}

TEST_CASE("ising finite difference equals the analytic derivative") {
  IsingPathSpec spec;
  spec.n_sites = 4;
  auto path = HamiltonianPath::make_ising(spec);
  OperatorSum fd = dterms_fd(path, 0.37, 0.01);
  OperatorSum an = ising_dterms(spec);
  REQUIRE(fd.size() == an.size());
  for (std::size_t i = 0; i < fd.size(); ++i) {
    CHECK(fd.terms[i].window == an.terms[i].window);
    CHECK(max_norm(fd.terms[i].matrix - an.terms[i].matrix) < 1e-12);
  }
}

// ---------------------------------------------------------------------------
// MPS family
// ---------------------------------------------------------------------------

TEST_CASE("mps state at s=0 is the entangled-pair product") {
  MpsPathSpec spec;
  spec.n_qudits = 4;
  spec.g = -0.5;
  StateVector state = mps_state(spec, 0.0);
  Vector expect = oracle::mps_amplitudes(spec.n_qudits, spec.g, 0.0);
  expect /= expect.norm();
  CHECK(std::abs(std::abs(state.amplitudes.dot(expect)) - 1.0) < 1e-12);
}

TEST_CASE("mps state matches the matrix-product oracle across (s, g)") {
  for (double g : {-0.9, -0.5, -0.13085}) {
    for (double s : {0.0, 0.3, 0.7, 1.0}) {
      MpsPathSpec spec;
      spec.n_qudits = 3;
      spec.g = g;
      StateVector state = mps_state(spec, s);
      CHECK(state.norm() == doctest::Approx(1.0).epsilon(1e-12));
      Vector expect = oracle::mps_amplitudes(spec.n_qudits, g, s);
      expect /= expect.norm();
      CHECK(std::abs(std::abs(state.amplitudes.dot(expect)) - 1.0) < 1e-11);
    }
  }
}

TEST_CASE("mps state at s=1, g=-1 limit: cluster-family overlap via oracle") {
  // g is restricted to the open interval, so probe near the cluster point.
  MpsPathSpec spec;
  spec.n_qudits = 3;
  spec.g = -0.999;
  StateVector state = mps_state(spec, 1.0);
  Vector expect = oracle::mps_amplitudes(spec.n_qudits, spec.g, 1.0);
  expect /= expect.norm();
  CHECK(std::abs(std::abs(state.amplitudes.dot(expect)) - 1.0) < 1e-11);
}

TEST_CASE("parent terms are Hermitian idempotent projectors") {
  MpsPathSpec spec;
  spec.n_qudits = 4;
  spec.g = -0.5;
  for (double s : {0.0, 0.3, 0.7, 1.0}) {
    OperatorSum h = mps_parent_terms(spec, s);
    CHECK(h.size() == 5);  // 3 bulk edges + 2 boundary qudits
    for (const auto& t : h.terms) {
      CHECK(is_hermitian(t.matrix, 1e-12));
      CHECK(max_norm(t.matrix * t.matrix - t.matrix) < 1e-10);
    }
  }
}

TEST_CASE("parent Hamiltonian annihilates the family state") {
  MpsPathSpec spec;
  spec.n_qudits = 4;
  spec.g = -0.5;
  for (double s : {0.0, 0.3, 0.7, 1.0}) {
    OperatorSum h = mps_parent_terms(spec, s);
    StateVector state = mps_state(spec, s);
    Vector hpsi = apply_sum(h, state.amplitudes);
    CHECK(hpsi.norm() < 1e-10);
  }
}

TEST_CASE("bulk kernel dimension is 12 at s=0 (rank of rho is 4)") {
  MpsPathSpec spec;
  spec.n_qudits = 4;
  spec.g = -0.5;
  StateVector state = mps_state(spec, 0.0);
  Matrix rho = reduced_density(state, SiteWindow(1, 3));
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
  int nonzero = 0;
  for (Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > 1e-10) ++nonzero;
  CHECK(nonzero == 4);
}

TEST_CASE("unique ground state: dense diagonalization confirms the family") {
  for (int n_p : {3, 4}) {
    MpsPathSpec spec;
    spec.n_qudits = n_p;
    spec.g = -0.5;
    for (double s : {0.25, 0.75}) {
      Matrix h = materialize(mps_parent_terms(spec, s));
      Eigen::SelfAdjointEigenSolver<Matrix> es(h);
      CHECK(std::abs(es.eigenvalues()(0)) < 1e-10);
      CHECK(es.eigenvalues()(1) > 1e-6);  // unique zero mode
      StateVector state = mps_state(spec, s);
      CHECK(std::abs(std::abs(es.eigenvectors().col(0).dot(state.amplitudes))) >
            1.0 - 1e-10);
    }
  }
}

TEST_CASE("kernel gap check reports degenerate kernels") {
  MpsPathSpec spec;
  spec.n_qudits = 3;
  spec.g = -0.5;
  spec.kernel_gap_tol = 10.0;  // absurd tolerance forces the error path
  CHECK_THROWS_AS(mps_parent_terms(spec, 0.5), DegenerateKernelError);
}

TEST_CASE("correlation length map and its inverse") {
  CHECK(xi_of_g(-0.999) < 0.15);  // xi -> 0 toward the cluster point
  for (double xi : {3.8, 0.9, 1.6, 2.5}) {
    CHECK(xi_of_g(g_of_xi(xi)) == doctest::Approx(xi).epsilon(1e-10));
  }
  CHECK(g_of_xi(3.8) == doctest::Approx(-0.13085).epsilon(1e-4));
  CHECK(g_of_xi(0.9) == doctest::Approx(-0.50465).epsilon(1e-4));
  CHECK_THROWS_AS(xi_of_g(0.5), DomainError);
  CHECK_THROWS_AS(g_of_xi(-1.0), DomainError);
}

TEST_CASE("mps finite difference converges at second order") {
  MpsPathSpec spec;
  spec.n_qudits = 3;
  spec.g = -0.5;
  auto path = HamiltonianPath::make_mps(spec);
  const double s = 0.37;
  OperatorSum d1 = dterms_fd(path, s, 0.02);
  OperatorSum d2 = dterms_fd(path, s, 0.01);
  OperatorSum d3 = dterms_fd(path, s, 0.005);
  // Richardson: (d1 - d2) should be about 4x (d2 - d3) per term.
  for (std::size_t i = 0; i < d1.size(); ++i) {
    double big = max_norm(d1.terms[i].matrix - d2.terms[i].matrix);
    double small = max_norm(d2.terms[i].matrix - d3.terms[i].matrix);
    if (small < 1e-12) continue;
    CHECK(big / small == doctest::Approx(4.0).epsilon(0.15));
  }
}

TEST_CASE("path ground states satisfy the endpoint energies") {
  IsingPathSpec spec;
  spec.n_sites = 3;
  auto path = HamiltonianPath::make_ising(spec);
  StateVector init = path_initial_state(path);
  Matrix h0 = materialize(ising_terms(spec, 0.0));
  double e0 = (init.amplitudes.dot(h0 * init.amplitudes)).real();
  Eigen::SelfAdjointEigenSolver<Matrix> es(h0);
  CHECK(e0 == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-12));
}
