#include "twistlap/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <lapacke.h>

#include "twistlap/errors.hpp"

namespace twistlap {

namespace {

struct RawPairs {
  std::vector<double> values;
  Eigen::MatrixXcd vectors;  // columns in the symmetrised frame
  std::string method;
  int matvecs = 0;
};

RawPairs solve_tridiagonal(const SparseMatrix& s, const std::vector<Eigen::Index>& order,
                           const SolveOptions& opt) {
  const auto n = static_cast<Eigen::Index>(order.size());
  std::vector<double> diag(static_cast<std::size_t>(n));
  std::vector<double> off(static_cast<std::size_t>(std::max<Eigen::Index>(n - 1, 1)), 0.0);
  std::vector<Complex> phase(static_cast<std::size_t>(n), Complex(1.0, 0.0));
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    diag[ui] = s.coeff(order[ui], order[ui]).real();
    if (i + 1 < n) {
      // Unitary diagonal rescaling makes every off-diagonal real and >= 0.
      const Complex e = s.coeff(order[ui], order[ui + 1]);
      const double mag = std::abs(e);
      off[ui] = mag;
      phase[ui + 1] = mag > 0.0 ? phase[ui] * std::conj(e) / mag : Complex(1.0, 0.0);
    }
  }

  const Eigen::Index below = std::isfinite(opt.lower_bound) ? sturm_count(diag, off, opt.lower_bound) : 0;
  const Eigen::Index il = below + 1;
  const Eigen::Index iu = std::min<Eigen::Index>(n, below + opt.k);
  RawPairs out;
  out.method = "tridiagonal";
  if (il > iu) {
    out.vectors.resize(n, 0);
    return out;
  }

  std::vector<double> d = diag;
  std::vector<double> e = off;
  e.resize(static_cast<std::size_t>(n));
  const auto count = static_cast<std::size_t>(iu - il + 1);
  std::vector<double> w(static_cast<std::size_t>(n));
  std::vector<double> z(static_cast<std::size_t>(n) * count);
  std::vector<lapack_int> support(2 * count);
  lapack_int found = 0;
  const char jobz = 'V';
  const lapack_int info = LAPACKE_dstevr(
      LAPACK_COL_MAJOR, jobz, 'I', static_cast<lapack_int>(n), d.data(), e.data(), 0.0, 0.0,
      static_cast<lapack_int>(il), static_cast<lapack_int>(iu), 0.0, &found, w.data(), z.data(),
      static_cast<lapack_int>(n), support.data());
  if (info != 0) {
    throw ConvergenceError("LAPACK dstevr failed with info " + std::to_string(info),
                           std::numeric_limits<double>::infinity());
  }
  out.values.assign(w.begin(), w.begin() + found);
  out.vectors = Eigen::MatrixXcd::Zero(s.rows(), found);
  for (lapack_int c = 0; c < found; ++c) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      out.vectors(order[ui], c) = phase[ui] * z[static_cast<std::size_t>(c) * static_cast<std::size_t>(n) + ui];
    }
  }
  return out;
}

RawPairs solve_dense(const SparseMatrix& s, const SolveOptions& opt) {
  const Eigen::MatrixXcd dense = Eigen::MatrixXcd(s);
  const Eigen::MatrixXcd herm = 0.5 * (dense + dense.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("dense Hermitian eigensolver failed",
                           std::numeric_limits<double>::infinity());
  }
  RawPairs out;
  out.method = "dense";
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < herm.rows() && static_cast<int>(keep.size()) < opt.k; ++i) {
    if (solver.eigenvalues()[i] >= opt.lower_bound) {
      keep.push_back(i);
    }
  }
  out.vectors.resize(herm.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    out.values.push_back(solver.eigenvalues()[keep[c]]);
    out.vectors.col(static_cast<Eigen::Index>(c)) = solver.eigenvectors().col(keep[c]);
  }
  return out;
}

// Lanczos, then deflated restarts until a fresh Krylov space finds nothing
// below the current k-th value.  A single start vector only ever sees one
// direction of an exactly degenerate eigenspace, so the restarts are what
// recover Landau-level multiplicities.
RawPairs solve_lanczos(const SparseMatrix& s, const SolveOptions& opt) {
  const Eigen::Index n = s.rows();
  const int k = static_cast<int>(std::min<Eigen::Index>(opt.k, n));
  const int restarts = opt.max_restarts > 0 ? opt.max_restarts : 50 * k;

  LanczosResult first = lanczos_smallest(s, k, opt.tol, opt.seed, Eigen::MatrixXcd(n, 0),
                                         restarts, opt.krylov_dim);
  std::vector<double> values = first.values;
  Eigen::MatrixXcd vectors = first.vectors;
  int matvecs = first.matvecs;

  for (int round = 1; round <= k && vectors.cols() < n; ++round) {
    const int want = static_cast<int>(std::min<Eigen::Index>(k, n - vectors.cols()));
    LanczosResult extra = lanczos_smallest(s, want, opt.tol, opt.seed + 0x9E3779B97F4A7C15ULL * round,
                                           vectors, restarts, opt.krylov_dim);
    matvecs += extra.matvecs;
    const double kth = values.back();
    const double margin = 10.0 * opt.tol;
    std::vector<Eigen::Index> accepted;
    for (std::size_t i = 0; i < extra.values.size(); ++i) {
      if (extra.values[i] < kth - margin) {
        accepted.push_back(static_cast<Eigen::Index>(i));
      }
    }
    if (accepted.empty()) {
      break;
    }
    Eigen::MatrixXcd merged(n, vectors.cols() + static_cast<Eigen::Index>(accepted.size()));
    merged.leftCols(vectors.cols()) = vectors;
    for (std::size_t c = 0; c < accepted.size(); ++c) {
      merged.col(vectors.cols() + static_cast<Eigen::Index>(c)) = extra.vectors.col(accepted[c]);
      values.push_back(extra.values[static_cast<std::size_t>(accepted[c])]);
    }
    vectors = std::move(merged);
  }

  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return values[a] < values[b]; });
  const std::size_t keep = std::min<std::size_t>(idx.size(), static_cast<std::size_t>(k));
  RawPairs out;
  out.method = "lanczos";
  out.matvecs = matvecs;
  out.vectors.resize(n, static_cast<Eigen::Index>(keep));
  for (std::size_t c = 0; c < keep; ++c) {
    out.values.push_back(values[idx[c]]);
    out.vectors.col(static_cast<Eigen::Index>(c)) = vectors.col(static_cast<Eigen::Index>(idx[c]));
  }
  return out;
}

}  // namespace

std::optional<std::vector<Eigen::Index>> path_ordering(const SparseMatrix& symmetric) {
  const Eigen::Index n = symmetric.rows();
  std::vector<std::vector<Eigen::Index>> adj(static_cast<std::size_t>(n));
  for (Eigen::Index r = 0; r < symmetric.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(symmetric, r); it; ++it) {
      if (it.row() != it.col() && it.value() != Complex(0.0, 0.0)) {
        auto& nb = adj[static_cast<std::size_t>(it.row())];
        if (std::find(nb.begin(), nb.end(), it.col()) == nb.end()) {
          nb.push_back(it.col());
        }
        auto& nb2 = adj[static_cast<std::size_t>(it.col())];
        if (std::find(nb2.begin(), nb2.end(), it.row()) == nb2.end()) {
          nb2.push_back(it.row());
        }
      }
    }
  }
  for (const auto& nb : adj) {
    if (nb.size() > 2) {
      return std::nullopt;
    }
  }
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::vector<Eigen::Index> order;
  order.reserve(static_cast<std::size_t>(n));
  auto walk = [&](Eigen::Index start) {
    Eigen::Index prev = -1;
    Eigen::Index cur = start;
    while (cur >= 0 && !seen[static_cast<std::size_t>(cur)]) {
      seen[static_cast<std::size_t>(cur)] = true;
      order.push_back(cur);
      Eigen::Index next = -1;
      for (Eigen::Index nb : adj[static_cast<std::size_t>(cur)]) {
        if (nb != prev) {
          next = nb;
          break;
        }
      }
      prev = cur;
      cur = next;
    }
    return cur < 0;  // false when the walk closed a cycle
  };
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!seen[static_cast<std::size_t>(i)] && adj[static_cast<std::size_t>(i)].size() < 2) {
      if (!walk(i)) {
        return std::nullopt;
      }
    }
  }
  if (static_cast<Eigen::Index>(order.size()) != n) {
    return std::nullopt;  // leftover vertices sit on cycles
  }
  return order;
}

Eigen::Index sturm_count(const std::vector<double>& diag, const std::vector<double>& offdiag,
                         double sigma) {
  const double tiny = std::numeric_limits<double>::min();
  Eigen::Index count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    const double e2 = i == 0 ? 0.0 : offdiag[i - 1] * offdiag[i - 1];
    q = diag[i] - sigma - (i == 0 ? 0.0 : e2 / q);
    if (q == 0.0) {
      q = -tiny;
    }
    if (q < 0.0) {
      ++count;
    }
  }
  return count;
}

double eigen_residual(const HermitianOperator& op, const Vector& v, double lambda) {
  const Vector r = op.apply(v) - lambda * v;
  return weighted_norm(op.weights(), r) / weighted_norm(op.weights(), v);
}

std::vector<Cluster> cluster_values(const std::vector<double>& sorted_values, double cluster_tol) {
  std::vector<Cluster> out;
  double sum = 0.0;
  double prev = 0.0;
  for (double v : sorted_values) {
    if (!out.empty() && std::abs(v - prev) <= cluster_tol * std::max(1.0, std::abs(v))) {
      auto& c = out.back();
      sum += v;
      ++c.multiplicity;
      c.value = sum / c.multiplicity;
    } else {
      out.push_back({v, 1});
      sum = v;
    }
    prev = v;
  }
  return out;
}

Spectrum cluster_multiplicities(Spectrum spectrum, double cluster_tol) {
  if (!(cluster_tol > 0.0)) {
    throw InvalidParameter("cluster tolerance must be positive");
  }
  spectrum.clusters = cluster_values(spectrum.eigenvalues, cluster_tol);
  return spectrum;
}

Spectrum smallest_eigs(const HermitianOperator& op, const SolveOptions& options) {
  if (options.k < 1) {
    throw InvalidParameter("smallest_eigs: k must be positive");
  }
  if (options.k > op.dim()) {
    throw InvalidParameter("smallest_eigs: k = " + std::to_string(options.k) +
                           " exceeds the dimension " + std::to_string(op.dim()));
  }
  if (!(options.tol > 0.0)) {
    throw InvalidParameter("smallest_eigs: tolerance must be positive");
  }

  const SparseMatrix s = op.symmetrized();
  RawPairs raw;
  SolverMethod method = options.method;
  std::optional<std::vector<Eigen::Index>> order;
  if (method == SolverMethod::Auto || method == SolverMethod::Tridiagonal) {
    order = path_ordering(s);
    if (!order && method == SolverMethod::Tridiagonal) {
      throw InvalidParameter("smallest_eigs: operator is not tridiagonal in any ordering");
    }
  }
  if (method == SolverMethod::Auto) {
    method = order ? SolverMethod::Tridiagonal
                   : (op.dim() <= kDenseLimit ? SolverMethod::Dense : SolverMethod::Lanczos);
  }
  switch (method) {
    case SolverMethod::Tridiagonal:
      raw = solve_tridiagonal(s, *order, options);
      break;
    case SolverMethod::Dense:
      raw = solve_dense(s, options);
      break;
    case SolverMethod::Lanczos:
      if (std::isfinite(options.lower_bound)) {
        throw InvalidParameter("smallest_eigs: the Lanczos path has no lower_bound filter");
      }
      raw = solve_lanczos(s, options);
      break;
    case SolverMethod::Auto:
      break;
  }

  Spectrum out;
  out.method = raw.method;
  out.matvecs = raw.matvecs;
  out.eigenvalues = raw.values;
  const RealVector inv_sqrt_w = op.weights().cwiseSqrt().cwiseInverse();
  Eigen::MatrixXcd coeff(op.dim(), raw.vectors.cols());
  double worst = 0.0;
  for (Eigen::Index c = 0; c < raw.vectors.cols(); ++c) {
    Vector y = raw.vectors.col(c);
    y /= y.norm();
    const Vector r = s * y - raw.values[static_cast<std::size_t>(c)] * y;
    const double res = r.norm();
    out.residuals.push_back(res);
    worst = std::max(worst, res);
    coeff.col(c) = inv_sqrt_w.cast<Complex>().asDiagonal() * y;
  }
  if (worst > options.tol) {
    throw ConvergenceError("eigenpair residual " + std::to_string(worst) +
                               " above tolerance " + std::to_string(options.tol) + " (" +
                               out.method + ")",
                           worst);
  }
  if (options.want_vectors) {
    out.vectors = std::move(coeff);
  }
  return out;
}

Spectrum smallest_eigs(const HermitianOperator& op, int k, double tol, std::uint64_t seed) {
  SolveOptions options;
  options.k = k;
  options.tol = tol;
  options.seed = seed;
  return smallest_eigs(op, options);
}

}  // namespace twistlap
