#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "twistlap/bundle.hpp"
#include "twistlap/geometry.hpp"

namespace twistlap {

using Complex = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

struct SphereMode {
  int m = 0;
  friend bool operator==(const SphereMode&, const SphereMode&) = default;
};
struct TorusGrid {
  friend bool operator==(const TorusGrid&, const TorusGrid&) = default;
};
using Backend = std::variant<SphereMode, TorusGrid>;

/// Weighted inner product <u, v>_W = sum_i w_i conj(u_i) v_i.
Complex weighted_dot(const RealVector& weights, const Vector& u, const Vector& v);
double weighted_norm(const RealVector& weights, const Vector& u);

/// L2 adjoint of A : (C^n, W_domain) -> (C^m, W_range), i.e.
/// W_domain^{-1} A^H W_range.
SparseMatrix weighted_adjoint(const SparseMatrix& a, const RealVector& domain_weights,
                              const RealVector& range_weights);

/// Operator on coefficient vectors that is self-adjoint for diag(weights).
class HermitianOperator {
 public:
  HermitianOperator(SparseMatrix matrix, RealVector weights);

  Eigen::Index dim() const noexcept { return matrix_.rows(); }
  const SparseMatrix& matrix() const noexcept { return matrix_; }
  const RealVector& weights() const noexcept { return weights_; }

  Vector apply(const Vector& v) const { return matrix_ * v; }

  /// W^{1/2} A W^{-1/2}; Hermitian in the plain sense.
  SparseMatrix symmetrized() const;

 private:
  SparseMatrix matrix_;
  RealVector weights_;
};

/// Discrete first-order data for one line bundle on one backend.  Sections
/// live on `weights_sec`, (0,1)-forms on `weights_form`, and the two
/// covariant-derivative components each on their own `weights_grad[i]`.
struct OperatorSet {
  SurfaceGeometry geometry;
  BundleSpec bundle;
  Backend backend;
  int grid_size = 0;

  SparseMatrix dbar;
  std::array<SparseMatrix, 2> grad;
  RealVector weights_sec;
  RealVector weights_form;
  std::array<RealVector, 2> weights_grad;
  double he_constant = 0.0;

  /// Flux of i Lambda F through each cell of the section grid, read off the
  /// assembled connection data; cell_area holds the matching areas.
  RealVector cell_flux;
  RealVector cell_area;
};

// ---------------------------------------------------------------------------
// Sphere backend: azimuthal mode m of a section f(theta) e^{i m phi} in the
// north gauge, monopole potential a(theta) = (d/2)(1 - cos theta).
// Sections sit at cell centres theta_j = (j + 1/2) pi / N; (0,1)-forms at the
// N + 1 cell faces, the two pole faces standing for the polar caps.

OperatorSet assemble_sphere_mode(const SurfaceGeometry& geometry, const BundleSpec& bundle,
                                 int m, int grid_size);

/// Same, but also admits degree 0 (flat baseline tests).
OperatorSet assemble_sphere_mode_unchecked(const SurfaceGeometry& geometry,
                                           const BundleSpec& bundle, int m, int grid_size);

/// Azimuthal modes searched for the k lowest eigenvalues: [d - k - 2, k + 2].
std::pair<int, int> default_mode_range(int degree, int k);

// ---------------------------------------------------------------------------
// Torus backend: N x N grid, Peierls link phases.

/// Link phases U_x(i, j), U_y(i, j) on the N x N grid, site index i + N j.
/// The covariant shift along x reads (S_x psi)(p) = U_x(p) psi(p + x).
struct TorusLinks {
  int n = 0;
  std::vector<Complex> ux;
  std::vector<Complex> uy;
};

/// Landau-gauge links with uniform flux 2 pi d / N^2 per plaquette; the x
/// wrap-around links carry the remaining twist.
TorusLinks landau_links(int grid_size, int degree);

/// U_x(p) -> g(p) U_x(p) conj(g(p + x)), likewise for y.
TorusLinks gauge_transform(const TorusLinks& links, const std::vector<Complex>& gauge);

/// Holonomy U_x(p) U_y(p + x) conj(U_x(p + y)) conj(U_y(p)) of every plaquette.
std::vector<Complex> plaquette_holonomies(const TorusLinks& links);

OperatorSet assemble_torus(const SurfaceGeometry& geometry, const BundleSpec& bundle,
                           int grid_size);

/// Assembles from explicit links (gauge tests, flat baseline).  Does not
/// check the degree.
OperatorSet assemble_torus_from_links(const SurfaceGeometry& geometry, const BundleSpec& bundle,
                                      const TorusLinks& links);

// ---------------------------------------------------------------------------
// Derived second-order operators.

/// dbar^* dbar on sections.
HermitianOperator dolbeault_laplacian(const OperatorSet& ops);

/// dbar dbar^* on (0,1)-forms.
HermitianOperator form_laplacian(const OperatorSet& ops);

/// sum_i grad_i^* grad_i on sections, built without touching dbar.
HermitianOperator trace_laplacian(const OperatorSet& ops);

/// sqrt(2) [[0, dbar^*], [dbar, 0]] on sections (+) (0,1)-forms, sections first.
HermitianOperator dirac_block(const OperatorSet& ops);

/// max over `samples` pseudo-random pairs of |<Au, v> - <u, Av>| / (|u| |v|).
double hermiticity_residual(const HermitianOperator& op, std::uint64_t seed, int samples = 8);

/// How weitzenbock_residual probes the identity.  With smooth_subspace > 0 the
/// probe vectors are random combinations of that many lowest eigenvectors of
/// the trace Laplacian and the residual is projected back onto their span
/// (a Galerkin residual that converges with the grid).  With 0 the probes are
/// raw random vectors and the full residual norm is taken.
struct WeitzenbockProbe {
  int batch = 6;
  int smooth_subspace = 8;
  std::uint64_t seed = 0;
};

/// max_u |(Delta - 1/2 nabla^* nabla + c/2) u| over unit probe vectors u.
double weitzenbock_residual(const OperatorSet& ops, const WeitzenbockProbe& probe = {});

/// (|nabla psi|^2 - (lambda / n)|psi|^2) / |nabla psi|^2 for an eigenpair of
/// the Dolbeault Laplacian.  Throws StaleEigenpair when the pair's residual
/// exceeds `max_residual`.
double sharpness_defect(const OperatorSet& ops, const Vector& eigenvector, double eigenvalue,
                        int n, double max_residual = 1e-8);

}  // namespace twistlap
