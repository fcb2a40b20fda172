#pragma once

#include <cstdint>

#include "twistlap/geometry.hpp"

namespace twistlap {

/// Hermitian bundle with a Hermitian-Einstein connection, i Lambda F = c Id.
/// The operator backends only handle line bundles (rank 1) over surfaces
/// (complex dimension 1) of negative degree; the closed-form routines accept
/// any rank and dimension.
struct BundleSpec {
  int degree = 0;
  int rank = 1;
  int complex_dimension = 1;
  double he_constant = 0.0;

  friend bool operator==(const BundleSpec&, const BundleSpec&) = default;
};

/// (n-1)! in exact integer arithmetic; throws once it no longer fits.
std::uint64_t factorial_of_dimension_shift(int n);

/// c = 2 pi deg / ((n-1)! rk vol).
double he_constant(int n, int degree, int rank, double volume);

/// Bundle over `geometry` with c computed from its area.
BundleSpec make_bundle(const SurfaceGeometry& geometry, int degree, int rank = 1,
                       int complex_dimension = 1);

/// Degree of K^{1/2} (x) E: deg - rk (1 - g).
int half_canonical_twist_degree(int degree, int rank, int genus);

/// i Lambda of the curvature of K^{-1} with its Chern connection, computed as
/// the HE constant of a rank-1 bundle of degree 2 - 2g.  Equals R/2.
double anticanonical_lambda_curvature(const SurfaceGeometry& geometry);

/// Throws InvalidParameter unless the bundle can be fed to an operator
/// backend (rank 1, n = 1, degree < 0).  `allow_zero_degree` admits d = 0
/// for flat baseline checks.
void require_numeric_bundle(const BundleSpec& bundle, bool allow_zero_degree = false);

}  // namespace twistlap
