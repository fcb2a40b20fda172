#pragma once

#include <string_view>
#include <vector>

#include "twistlap/eigensolve.hpp"

namespace twistlap {

/// The four closed-form lower bounds the lab checks.
enum class BoundKind { NaiveDolbeault, MainDolbeault, ComplexDirac, RealDirac };

std::string_view to_string(BoundKind kind);

// Every function here is pure.  Input outside a formula's hypotheses throws
// DomainError; malformed input (vol <= 0, n < 1, ...) throws InvalidParameter.

/// -pi d / ((n-1)! rk vol).  Any sign of degree.
double bound_dolbeault_naive(int n, int degree, int rank, double volume);

/// (2n/(2n-1)) times the naive bound; needs degree < 0.
double bound_dolbeault_main(int n, int degree, int rank, double volume);

/// sqrt(-4 pi d / (rk vol)); needs degree < 0.
double bound_dirac_complex(int degree, int rank, double volume);

/// sqrt(4 pi (1 - g)/vol - 4 pi d/(rk vol)); needs a nonnegative radicand.
double bound_dirac_real(int genus, int degree, int rank, double volume);

/// sqrt((R/2)((q+1)^2 - (q+1) degL)) for q = 0..q_max.
std::vector<double> sphere_dirac_spectrum(double scalar_curvature, int degL, int q_max);

/// (R/4)((q+1)^2 - (q+1)(1+d)) for q = 0..q_max.
std::vector<double> sphere_dolbeault_spectrum(double scalar_curvature, int degree, int q_max);

/// Landau levels of the Dolbeault Laplacian on a flat torus:
/// -2 pi d (k+1)/vol, each |d| times, k = 0..k_max.
std::vector<Cluster> torus_dolbeault_spectrum(double volume, int degree, int k_max);

/// sqrt(2 lambda) for the nonzero inputs, ascending.
std::vector<double> dirac_from_dolbeault(const std::vector<double>& dolbeault_values);

}  // namespace twistlap
