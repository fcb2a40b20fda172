#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "twistlap/eigensolve.hpp"
#include "twistlap/errors.hpp"

namespace twistlap {

namespace {

// Two passes of classical Gram-Schmidt against `locked` and the first `cols`
// columns of `basis`.  Coefficients against `basis` are accumulated in `coeff`.
void orthogonalize(Vector& w, const Eigen::MatrixXcd& locked, const Eigen::MatrixXcd& basis,
                   Eigen::Index cols, Vector* coeff) {
  for (int pass = 0; pass < 2; ++pass) {
    if (locked.cols() > 0) {
      const Vector c = locked.adjoint() * w;
      w.noalias() -= locked * c;
    }
    if (cols > 0) {
      const Vector c = basis.leftCols(cols).adjoint() * w;
      w.noalias() -= basis.leftCols(cols) * c;
      if (coeff != nullptr) {
        coeff->head(cols) += c;
      }
    }
  }
}

Vector random_unit(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> normal;
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double re = normal(rng);
    v[i] = Complex(re, normal(rng));
  }
  return v / v.norm();
}

}  // namespace

LanczosResult lanczos_smallest(const SparseMatrix& a, int k, double tol, std::uint64_t seed,
                               const Eigen::MatrixXcd& locked, int max_restarts, int krylov_dim) {
  const Eigen::Index n = a.rows();
  const Eigen::Index free_dim = n - locked.cols();
  if (k < 1 || k > free_dim) {
    throw InvalidParameter("lanczos: k = " + std::to_string(k) + " does not fit the free space");
  }
  Eigen::Index m = krylov_dim > 0 ? krylov_dim : std::max(2 * k + 20, k + 60);
  m = std::clamp<Eigen::Index>(m, std::min<Eigen::Index>(k + 1, free_dim), free_dim);

  std::mt19937_64 rng(seed);
  Eigen::MatrixXcd basis(n, m + 1);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(m, m);  // upper triangle holds V^H A V

  Vector start = random_unit(rng, n);
  orthogonalize(start, locked, basis, 0, nullptr);
  basis.col(0) = start / start.norm();

  LanczosResult out;
  Eigen::Index keep = 0;
  double best = std::numeric_limits<double>::infinity();
  for (int cycle = 0;; ++cycle) {
    Eigen::Index filled = m;
    double beta = 0.0;
    for (Eigen::Index j = keep; j < m; ++j) {
      Vector w = a * basis.col(j);
      ++out.matvecs;
      Vector coeff = Vector::Zero(m + 1);
      orthogonalize(w, locked, basis, j + 1, &coeff);
      h.col(j).head(j + 1) = coeff.head(j + 1);
      beta = w.norm();
      const double scale = std::max(1.0, std::abs(h(j, j)));
      if (beta <= 1e-13 * scale) {
        // Invariant subspace.  Continue from a fresh direction, uncoupled.
        beta = 0.0;
        if (j + 1 >= free_dim || j + 1 >= m) {
          filled = j + 1;
          break;
        }
        Vector fresh = random_unit(rng, n);
        orthogonalize(fresh, locked, basis, j + 1, nullptr);
        basis.col(j + 1) = fresh / fresh.norm();
        if (j + 1 < m) {
          h(j, j + 1) = 0.0;
        }
        continue;
      }
      basis.col(j + 1) = w / beta;
    }

    Eigen::MatrixXcd t = h.topLeftCorner(filled, filled);
    for (Eigen::Index c = 0; c < filled; ++c) {
      t(c, c) = t(c, c).real();
      for (Eigen::Index r = c + 1; r < filled; ++r) {
        t(r, c) = std::conj(t(c, r));
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ritz(t);
    const Eigen::VectorXd& theta = ritz.eigenvalues();
    const Eigen::MatrixXcd& s = ritz.eigenvectors();

    const Eigen::Index want = std::min<Eigen::Index>(k, filled);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < want; ++i) {
      worst = std::max(worst, beta * std::abs(s(filled - 1, i)));
    }
    best = std::min(best, worst);

    if (worst <= 0.5 * tol || filled < m || cycle >= max_restarts) {
      if (worst > tol && filled == m) {
        throw ConvergenceError("lanczos did not converge after " + std::to_string(cycle) +
                                   " restarts",
                               best);
      }
      const Eigen::MatrixXcd y = basis.leftCols(filled) * s.leftCols(want);
      out.vectors.resize(n, want);
      for (Eigen::Index i = 0; i < want; ++i) {
        out.values.push_back(theta[i]);
        out.residuals.push_back(beta * std::abs(s(filled - 1, i)));
        out.vectors.col(i) = y.col(i) / y.col(i).norm();
      }
      return out;
    }

    // Thick restart: keep the lowest Ritz vectors plus the residual direction.
    keep = std::min<Eigen::Index>(m - 1, k + (m - k) / 2);
    const Eigen::MatrixXcd y = basis.leftCols(m) * s.leftCols(keep);
    const Vector resid = basis.col(m);
    basis.leftCols(keep) = y;
    basis.col(keep) = resid;
    h.setZero();
    for (Eigen::Index i = 0; i < keep; ++i) {
      h(i, i) = theta[i];
    }
  }
}

}  // namespace twistlap
