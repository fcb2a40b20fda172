#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <numbers>
#include <random>

#include "twistlap/eigensolve.hpp"
#include "twistlap/errors.hpp"
#include "twistlap/operators.hpp"

using namespace twistlap;

namespace {

HermitianOperator plain(const Eigen::MatrixXcd& m) {
  SparseMatrix s = m.sparseView();
  return HermitianOperator(std::move(s), RealVector::Ones(m.rows()));
}

Eigen::MatrixXcd random_hermitian(std::mt19937_64& rng, int n, bool sparse) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      if (sparse && i != j && unit(rng) > 0.05) {
        continue;
      }
      const Complex z(normal(rng), i == j ? 0.0 : normal(rng));
      a(i, j) = z;
      a(j, i) = std::conj(z);
    }
  }
  return a;
}

}  // namespace

TEST_CASE("small analytic spectra") {
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(3, 3);
  d.diagonal() << 3.0, 1.0, 2.0;
  auto s = smallest_eigs(plain(d), 3, 1e-10, 0);
  CHECK(s.eigenvalues == std::vector<double>{1.0, 2.0, 3.0});

  Eigen::MatrixXcd two(2, 2);
  two << 2.0, -1.0, -1.0, 2.0;
  s = smallest_eigs(plain(two), 2, 1e-10, 0);
  CHECK(s.eigenvalues[0] == doctest::Approx(1.0));
  CHECK(s.eigenvalues[1] == doctest::Approx(3.0));

  // Periodic difference Laplacian on 4 sites: 2 - 2 cos(2 pi j / 4).
  Eigen::MatrixXcd ring = Eigen::MatrixXcd::Zero(4, 4);
  for (int i = 0; i < 4; ++i) {
    ring(i, i) = 2.0;
    ring(i, (i + 1) % 4) = -1.0;
    ring((i + 1) % 4, i) = -1.0;
  }
  for (SolverMethod m : {SolverMethod::Auto, SolverMethod::Dense, SolverMethod::Lanczos}) {
    SolveOptions o;
    o.k = 4;
    o.method = m;
    s = smallest_eigs(plain(ring), o);
    REQUIRE(s.eigenvalues.size() == 4);
    CHECK(s.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
    CHECK(s.eigenvalues[1] == doctest::Approx(2.0));
    CHECK(s.eigenvalues[2] == doctest::Approx(2.0));
    CHECK(s.eigenvalues[3] == doctest::Approx(4.0));
  }
}

TEST_CASE("argument checks") {
  Eigen::MatrixXcd two(2, 2);
  two << 2.0, -1.0, -1.0, 2.0;
  CHECK_THROWS_AS(smallest_eigs(plain(two), 3, 1e-10, 0), InvalidParameter);
  CHECK_THROWS_AS(smallest_eigs(plain(two), 0, 1e-10, 0), InvalidParameter);
  CHECK_THROWS_AS(smallest_eigs(plain(two), 1, 0.0, 0), InvalidParameter);
  Eigen::MatrixXcd full = Eigen::MatrixXcd::Ones(3, 3);
  SolveOptions o;
  o.method = SolverMethod::Tridiagonal;
  CHECK_THROWS_AS(smallest_eigs(plain(full), o), InvalidParameter);
}

TEST_CASE("iteration cap raises a convergence error") {
  std::mt19937_64 rng(5);
  const auto a = random_hermitian(rng, 150, false);
  SolveOptions o;
  o.k = 4;
  o.tol = 1e-14;
  o.method = SolverMethod::Lanczos;
  o.max_restarts = 1;
  o.krylov_dim = 10;
  try {
    smallest_eigs(plain(a), o);
    FAIL("expected a convergence error");
  } catch (const ConvergenceError& e) {
    CHECK(e.best_residual() > 0.0);
    CHECK(std::isfinite(e.best_residual()));
  }
}

TEST_CASE("50 random Hermitian instances agree with brute force") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> dim(20, 200);
  std::uniform_int_distribution<int> kdist(1, 8);
  std::uniform_real_distribution<double> wdist(0.2, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = dim(rng);
    const int k = kdist(rng);
    const auto a = random_hermitian(rng, n, trial % 2 == 1);
    // Half the instances carry a non-uniform weight: A = W^{-1} H is
    // self-adjoint in the W inner product and has the spectrum of
    // W^{-1/2} H W^{-1/2}.
    RealVector w = RealVector::Ones(n);
    if (trial % 4 >= 2) {
      for (int i = 0; i < n; ++i) {
        w[i] = wdist(rng);
      }
    }
    const Eigen::MatrixXcd weighted = w.cwiseInverse().asDiagonal() * a;
    const SparseMatrix sparse_w = weighted.sparseView();
    const HermitianOperator op(sparse_w, w);
    const RealVector is = w.cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXcd sym = is.asDiagonal() * a * is.asDiagonal();
    const Eigen::VectorXd ref =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(sym, Eigen::EigenvaluesOnly).eigenvalues();

    for (SolverMethod m : {SolverMethod::Lanczos, SolverMethod::Auto}) {
      SolveOptions o;
      o.k = k;
      o.tol = 1e-10;
      o.seed = static_cast<std::uint64_t>(trial);
      o.method = m;
      const Spectrum s = smallest_eigs(op, o);
      REQUIRE(s.eigenvalues.size() == static_cast<std::size_t>(k));
      for (int i = 0; i < k; ++i) {
        CHECK(std::abs(s.eigenvalues[i] - ref[i]) <= 1e-9);
        CHECK(s.residuals[i] <= 1e-10);
        // Stored residual matches a recomputation in the weighted norm.
        const double again = eigen_residual(op, s.vectors->col(i), s.eigenvalues[i]);
        CHECK(std::abs(again - s.residuals[i]) <= 1e-12);
      }
      CHECK(std::is_sorted(s.eigenvalues.begin(), s.eigenvalues.end()));
    }
  }
}

TEST_CASE("degenerate eigenvalues are recovered") {
  // Diagonal with a fivefold lowest level hidden behind a unitary rotation.
  const int n = 600;
  std::mt19937_64 rng(3);
  Eigen::VectorXd diag(n);
  for (int i = 0; i < n; ++i) {
    diag[i] = i < 5 ? 1.0 : 2.0 + i * 0.01;
  }
  Eigen::MatrixXcd q = random_hermitian(rng, n, false);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(q);
  const Eigen::MatrixXcd u = qr.householderQ();
  const Eigen::MatrixXcd a = u * diag.asDiagonal() * u.adjoint();
  SolveOptions o;
  o.k = 7;
  o.tol = 1e-9;
  const Spectrum s = smallest_eigs(plain(a), o);
  CHECK(s.method == "lanczos");
  const Spectrum c = cluster_multiplicities(s, 1e-6);
  REQUIRE(c.clusters.size() >= 2);
  CHECK(c.clusters[0].multiplicity == 5);
  CHECK(c.clusters[0].value == doctest::Approx(1.0));
}

TEST_CASE("determinism") {
  std::mt19937_64 rng(11);
  const auto a = random_hermitian(rng, 300, true);
  SolveOptions o;
  o.k = 6;
  o.seed = 42;
  const Spectrum s1 = smallest_eigs(plain(a), o);
  const Spectrum s2 = smallest_eigs(plain(a), o);
  CHECK(s1.eigenvalues == s2.eigenvalues);
  CHECK(s1.residuals == s2.residuals);
  CHECK(*s1.vectors == *s2.vectors);
}

TEST_CASE("tridiagonal path") {
  // Random complex Hermitian tridiagonal, scrambled by a permutation.
  const int n = 300;
  std::mt19937_64 rng(8);
  std::normal_distribution<double> normal;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    t(perm[i], perm[i]) = normal(rng);
    if (i + 1 < n) {
      const Complex z(normal(rng), normal(rng));
      t(perm[i], perm[i + 1]) = z;
      t(perm[i + 1], perm[i]) = std::conj(z);
    }
  }
  const SparseMatrix sp = t.sparseView();
  REQUIRE(path_ordering(sp).has_value());
  const Eigen::VectorXd ref =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(t, Eigen::EigenvaluesOnly).eigenvalues();
  SolveOptions o;
  o.k = 5;
  o.tol = 1e-10;
  const Spectrum s = smallest_eigs(plain(t), o);
  CHECK(s.method == "tridiagonal");
  for (int i = 0; i < 5; ++i) {
    CHECK(s.eigenvalues[i] == doctest::Approx(ref[i]).epsilon(1e-12));
  }
  // lower_bound skips everything below it.
  o.lower_bound = 0.5 * (ref[9] + ref[10]);
  const Spectrum up = smallest_eigs(plain(t), o);
  for (int i = 0; i < 5; ++i) {
    CHECK(up.eigenvalues[i] == doctest::Approx(ref[10 + i]).epsilon(1e-12));
  }

  // A cycle is not a path.
  Eigen::MatrixXcd ring = Eigen::MatrixXcd::Zero(5, 5);
  for (int i = 0; i < 5; ++i) {
    ring(i, (i + 1) % 5) = 1.0;
    ring((i + 1) % 5, i) = 1.0;
  }
  const SparseMatrix ring_sp = ring.sparseView();
  CHECK_FALSE(path_ordering(ring_sp).has_value());
}

TEST_CASE("Sturm count") {
  // Path Laplacian diag 2, off -1: eigenvalues 2 - 2 cos(k pi/(n+1)).
  const int n = 10;
  std::vector<double> d(n, 2.0), e(n - 1, -1.0);
  for (double sigma : {0.05, 1.0, 2.0, 3.9, 4.1}) {
    int expect = 0;
    for (int k = 1; k <= n; ++k) {
      expect += 2.0 - 2.0 * std::cos(k * std::numbers::pi / (n + 1)) < sigma;
    }
    CHECK(sturm_count(d, e, sigma) == expect);
  }
}

TEST_CASE("clustering") {
  auto c = cluster_values({1.000, 1.001, 5.0}, 1e-2);
  REQUIRE(c.size() == 2);
  CHECK(c[0].value == doctest::Approx(1.0005));
  CHECK(c[0].multiplicity == 2);
  CHECK(c[1].multiplicity == 1);
  CHECK(cluster_values({}, 1e-3).empty());
  Spectrum s;
  s.eigenvalues = {0.1, 0.1, 0.1, 0.3};
  s = cluster_multiplicities(s, 1e-3);
  int total = 0;
  for (const auto& cl : s.clusters) {
    total += cl.multiplicity;
  }
  CHECK(total == 4);
  CHECK_THROWS_AS(cluster_multiplicities(s, 0.0), InvalidParameter);
}

TEST_CASE("torus Landau multiplicity from the solver") {
  const auto g = make_torus(1.0);
  const auto ops = assemble_torus(g, make_bundle(g, -3), 48);
  SolveOptions o;
  o.k = 5;
  const Spectrum s = cluster_multiplicities(smallest_eigs(dolbeault_laplacian(ops), o), 1e-3);
  CHECK(s.clusters[0].multiplicity == 3);
}
