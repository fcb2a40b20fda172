#include "twistlap/operators.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "twistlap/eigensolve.hpp"
#include "twistlap/errors.hpp"

namespace twistlap {

namespace {

Vector random_vector(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> normal;
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v[i] = Complex(re, im);
  }
  return v;
}

SparseMatrix diagonal(const RealVector& d) {
  SparseMatrix out(d.size(), d.size());
  out.reserve(Eigen::VectorXi::Constant(d.size(), 1));
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    out.insert(i, i) = d[i];
  }
  out.makeCompressed();
  return out;
}

}  // namespace

Complex weighted_dot(const RealVector& weights, const Vector& u, const Vector& v) {
  return (u.conjugate().array() * weights.array().cast<Complex>() * v.array()).sum();
}

double weighted_norm(const RealVector& weights, const Vector& u) {
  return std::sqrt((weights.array() * u.array().abs2()).sum());
}

SparseMatrix weighted_adjoint(const SparseMatrix& a, const RealVector& domain_weights,
                              const RealVector& range_weights) {
  if (a.rows() != range_weights.size() || a.cols() != domain_weights.size()) {
    throw InvalidParameter("weighted_adjoint: weight sizes do not match the map");
  }
  const SparseMatrix ah = a.adjoint();
  SparseMatrix out = diagonal(domain_weights.cwiseInverse()) * ah * diagonal(range_weights);
  out.makeCompressed();
  return out;
}

HermitianOperator::HermitianOperator(SparseMatrix matrix, RealVector weights)
    : matrix_(std::move(matrix)), weights_(std::move(weights)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() != weights_.size()) {
    throw InvalidParameter("HermitianOperator: matrix must be square and match its weights");
  }
  if ((weights_.array() <= 0.0).any()) {
    throw InvalidParameter("HermitianOperator: quadrature weights must be positive");
  }
  matrix_.makeCompressed();
}

SparseMatrix HermitianOperator::symmetrized() const {
  const RealVector s = weights_.cwiseSqrt();
  SparseMatrix out = diagonal(s) * matrix_ * diagonal(s.cwiseInverse());
  out.makeCompressed();
  return out;
}

std::pair<int, int> default_mode_range(int degree, int k) {
  return {degree - k - 2, k + 2};
}

HermitianOperator dolbeault_laplacian(const OperatorSet& ops) {
  SparseMatrix lap = weighted_adjoint(ops.dbar, ops.weights_sec, ops.weights_form) * ops.dbar;
  return HermitianOperator(std::move(lap), ops.weights_sec);
}

HermitianOperator form_laplacian(const OperatorSet& ops) {
  SparseMatrix lap = ops.dbar * weighted_adjoint(ops.dbar, ops.weights_sec, ops.weights_form);
  return HermitianOperator(std::move(lap), ops.weights_form);
}

HermitianOperator trace_laplacian(const OperatorSet& ops) {
  SparseMatrix lap(ops.weights_sec.size(), ops.weights_sec.size());
  for (std::size_t i = 0; i < ops.grad.size(); ++i) {
    const SparseMatrix term =
        weighted_adjoint(ops.grad[i], ops.weights_sec, ops.weights_grad[i]) * ops.grad[i];
    lap += term;
  }
  return HermitianOperator(std::move(lap), ops.weights_sec);
}

HermitianOperator dirac_block(const OperatorSet& ops) {
  const Eigen::Index ns = ops.weights_sec.size();
  const Eigen::Index nf = ops.weights_form.size();
  const SparseMatrix adj = weighted_adjoint(ops.dbar, ops.weights_sec, ops.weights_form);
  const double scale = std::sqrt(2.0);

  std::vector<Eigen::Triplet<Complex>> entries;
  entries.reserve(static_cast<std::size_t>(2 * ops.dbar.nonZeros()));
  for (Eigen::Index r = 0; r < adj.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(adj, r); it; ++it) {
      entries.emplace_back(it.row(), ns + it.col(), scale * it.value());
    }
  }
  for (Eigen::Index r = 0; r < ops.dbar.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(ops.dbar, r); it; ++it) {
      entries.emplace_back(ns + it.row(), it.col(), scale * it.value());
    }
  }
  SparseMatrix block(ns + nf, ns + nf);
  block.setFromTriplets(entries.begin(), entries.end());

  RealVector weights(ns + nf);
  weights << ops.weights_sec, ops.weights_form;
  return HermitianOperator(std::move(block), std::move(weights));
}

double hermiticity_residual(const HermitianOperator& op, std::uint64_t seed, int samples) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Vector u = random_vector(rng, op.dim());
    const Vector v = random_vector(rng, op.dim());
    const Complex lhs = weighted_dot(op.weights(), op.apply(u), v);
    const Complex rhs = weighted_dot(op.weights(), u, op.apply(v));
    const double denom = weighted_norm(op.weights(), u) * weighted_norm(op.weights(), v);
    worst = std::max(worst, std::abs(lhs - rhs) / denom);
  }
  return worst;
}

double weitzenbock_residual(const OperatorSet& ops, const WeitzenbockProbe& probe) {
  const HermitianOperator lap = dolbeault_laplacian(ops);
  const HermitianOperator rough = trace_laplacian(ops);
  const RealVector& w = ops.weights_sec;
  const Eigen::Index n = w.size();

  auto defect = [&](const Vector& u) -> Vector {
    return lap.apply(u) - 0.5 * rough.apply(u) + (0.5 * ops.he_constant) * u;
  };

  std::mt19937_64 rng(probe.seed);
  double worst = 0.0;

  if (probe.smooth_subspace <= 0) {
    for (int b = 0; b < probe.batch; ++b) {
      Vector u = random_vector(rng, n);
      u /= weighted_norm(w, u);
      worst = std::max(worst, weighted_norm(w, defect(u)));
    }
    return worst;
  }

  // Smooth probe space: lowest trace-Laplacian eigenvectors, W-orthonormal.
  SolveOptions opts;
  opts.k = static_cast<int>(std::min<Eigen::Index>(probe.smooth_subspace, n));
  opts.tol = 1e-9 * std::max(1.0, std::abs(ops.he_constant));
  opts.seed = probe.seed;
  const Spectrum basis = smallest_eigs(rough, opts);
  const Eigen::MatrixXcd& q = *basis.vectors;

  for (int b = 0; b < probe.batch; ++b) {
    const Vector coeff = random_vector(rng, q.cols());
    Vector u = q * coeff;
    u /= weighted_norm(w, u);
    const Vector r = defect(u);
    // Coefficients of r in the W-orthonormal basis q.
    const Vector proj = q.adjoint() * (w.cast<Complex>().asDiagonal() * r);
    worst = std::max(worst, proj.norm());
  }
  return worst;
}

double sharpness_defect(const OperatorSet& ops, const Vector& eigenvector, double eigenvalue,
                        int n, double max_residual) {
  if (n < 1) {
    throw InvalidParameter("sharpness_defect: complex dimension must be >= 1");
  }
  const HermitianOperator lap = dolbeault_laplacian(ops);
  const double residual = eigen_residual(lap, eigenvector, eigenvalue);
  if (!(residual <= max_residual)) {
    throw StaleEigenpair("eigenpair residual " + std::to_string(residual) +
                             " exceeds the allowed " + std::to_string(max_residual),
                         residual);
  }
  double grad_norm2 = 0.0;
  for (std::size_t i = 0; i < ops.grad.size(); ++i) {
    const double g = weighted_norm(ops.weights_grad[i], ops.grad[i] * eigenvector);
    grad_norm2 += g * g;
  }
  const double psi_norm = weighted_norm(ops.weights_sec, eigenvector);
  if (!(grad_norm2 > 0.0)) {
    throw InvalidParameter("sharpness_defect: covariant derivative vanishes on the eigenvector");
  }
  return (grad_norm2 - (eigenvalue / n) * psi_norm * psi_norm) / grad_norm2;
}

}  // namespace twistlap
