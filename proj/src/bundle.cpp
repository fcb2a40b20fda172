#include "twistlap/bundle.hpp"

#include <limits>
#include <numbers>
#include <string>

#include "twistlap/errors.hpp"

namespace twistlap {

std::uint64_t factorial_of_dimension_shift(int n) {
  if (n < 1) {
    throw InvalidParameter("complex dimension must be at least 1");
  }
  std::uint64_t result = 1;
  for (int i = 2; i <= n - 1; ++i) {
    const auto factor = static_cast<std::uint64_t>(i);
    if (result > std::numeric_limits<std::uint64_t>::max() / factor) {
      throw InvalidParameter("(n-1)! overflows for n = " + std::to_string(n));
    }
    result *= factor;
  }
  return result;
}

double he_constant(int n, int degree, int rank, double volume) {
  if (!(volume > 0.0)) {
    throw InvalidParameter("volume must be positive");
  }
  if (rank < 1) {
    throw InvalidParameter("rank must be at least 1");
  }
  const auto fact = static_cast<double>(factorial_of_dimension_shift(n));
  return 2.0 * std::numbers::pi * degree / (fact * rank * volume);
}

BundleSpec make_bundle(const SurfaceGeometry& geometry, int degree, int rank,
                       int complex_dimension) {
  return BundleSpec{degree, rank, complex_dimension,
                    he_constant(complex_dimension, degree, rank, geometry.volume())};
}

int half_canonical_twist_degree(int degree, int rank, int genus) {
  return degree - rank * (1 - genus);
}

double anticanonical_lambda_curvature(const SurfaceGeometry& geometry) {
  return he_constant(1, 2 - 2 * geometry.genus(), 1, geometry.volume());
}

void require_numeric_bundle(const BundleSpec& bundle, bool allow_zero_degree) {
  if (bundle.rank != 1) {
    throw InvalidParameter("operator assembly needs a line bundle (rank 1)");
  }
  if (bundle.complex_dimension != 1) {
    throw InvalidParameter("operator assembly needs complex dimension 1");
  }
  if (bundle.degree > 0 || (bundle.degree == 0 && !allow_zero_degree)) {
    throw InvalidParameter("operator assembly needs negative degree, got " +
                           std::to_string(bundle.degree));
  }
}

}  // namespace twistlap
