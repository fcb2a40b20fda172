#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "twistlap/operators.hpp"

namespace twistlap {

struct Cluster {
  double value = 0.0;
  int multiplicity = 0;
  friend bool operator==(const Cluster&, const Cluster&) = default;
};

/// Low end of a spectrum.  Eigenvectors, when kept, are coefficient vectors
/// normalised in the operator's weighted inner product.
struct Spectrum {
  std::vector<double> eigenvalues;
  std::vector<double> residuals;
  std::optional<Eigen::MatrixXcd> vectors;
  std::vector<Cluster> clusters;
  std::string method;
  int matvecs = 0;
};

enum class SolverMethod { Auto, Tridiagonal, Dense, Lanczos };

struct SolveOptions {
  int k = 1;
  double tol = 1e-8;
  std::uint64_t seed = 0;
  bool want_vectors = true;
  SolverMethod method = SolverMethod::Auto;
  /// Only eigenvalues >= lower_bound are reported (tridiagonal/dense paths).
  double lower_bound = -std::numeric_limits<double>::infinity();
  /// Thick-restart cycles before giving up; 0 means 50 k.
  int max_restarts = 0;
  /// Krylov basis size; 0 picks one from k.
  int krylov_dim = 0;
};

/// Dimension at or below which Auto uses a dense Hermitian solve.
inline constexpr Eigen::Index kDenseLimit = 512;

/// k smallest eigenpairs.  Auto picks the tridiagonal path when the sparsity
/// graph is a union of paths, dense when dim <= kDenseLimit, and Lanczos with
/// full reorthogonalisation otherwise.  Every reported residual is <= tol or
/// ConvergenceError is thrown.
Spectrum smallest_eigs(const HermitianOperator& op, const SolveOptions& options);

Spectrum smallest_eigs(const HermitianOperator& op, int k, double tol, std::uint64_t seed);

/// Greedy left-to-right grouping: a value joins the open cluster when it is
/// within cluster_tol * max(1, |value|) of the previous value.  Cluster value
/// is the mean of its members.
std::vector<Cluster> cluster_values(const std::vector<double>& sorted_values, double cluster_tol);

Spectrum cluster_multiplicities(Spectrum spectrum, double cluster_tol);

/// |A v - lambda v|_W / |v|_W.
double eigen_residual(const HermitianOperator& op, const Vector& v, double lambda);

// Building blocks, exposed for testing.

/// Ordering along which a Hermitian matrix is tridiagonal, if its sparsity
/// graph is a disjoint union of paths.
std::optional<std::vector<Eigen::Index>> path_ordering(const SparseMatrix& symmetric);

/// Number of eigenvalues strictly below sigma of the real symmetric
/// tridiagonal matrix (diag, offdiag), by Sturm sequence.
Eigen::Index sturm_count(const std::vector<double>& diag, const std::vector<double>& offdiag,
                         double sigma);

struct LanczosResult {
  std::vector<double> values;
  Eigen::MatrixXcd vectors;
  std::vector<double> residuals;
  int matvecs = 0;
};

/// Thick-restart Lanczos with full reorthogonalisation on a plain Hermitian
/// matrix, deflating against the orthonormal columns of `locked`.
LanczosResult lanczos_smallest(const SparseMatrix& a, int k, double tol, std::uint64_t seed,
                               const Eigen::MatrixXcd& locked, int max_restarts, int krylov_dim);

}  // namespace twistlap
