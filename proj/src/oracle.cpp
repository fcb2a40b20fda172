#include "twistlap/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>

#include "twistlap/bundle.hpp"
#include "twistlap/errors.hpp"

namespace twistlap {

namespace {

constexpr double kPi = std::numbers::pi;

void check_common(int rank, double volume) {
  if (rank < 1) {
    throw InvalidParameter("rank must be >= 1");
  }
  if (!(volume > 0.0) || !std::isfinite(volume)) {
    throw InvalidParameter("volume must be positive and finite");
  }
}

void need_negative(int degree, const char* what) {
  if (degree >= 0) {
    throw DomainError(std::string(what) + " needs negative degree, got " + std::to_string(degree));
  }
}

void check_curvature(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw InvalidParameter("scalar curvature must be positive and finite");
  }
}

void check_count(int q_max) {
  if (q_max < 0) {
    throw InvalidParameter("level count must be nonnegative");
  }
}

}  // namespace

std::string_view to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::NaiveDolbeault:
      return "naive_dolbeault";
    case BoundKind::MainDolbeault:
      return "main_dolbeault";
    case BoundKind::ComplexDirac:
      return "complex_dirac";
    case BoundKind::RealDirac:
      return "real_dirac";
  }
  return "unknown";
}

double bound_dolbeault_naive(int n, int degree, int rank, double volume) {
  check_common(rank, volume);
  const double fact = static_cast<double>(factorial_of_dimension_shift(n));
  return -kPi * degree / (fact * rank * volume);
}

double bound_dolbeault_main(int n, int degree, int rank, double volume) {
  need_negative(degree, "the sharp Dolbeault bound");
  const double naive = bound_dolbeault_naive(n, degree, rank, volume);
  return (2.0 * n) / (2.0 * n - 1.0) * naive;
}

double bound_dirac_complex(int degree, int rank, double volume) {
  check_common(rank, volume);
  need_negative(degree, "the complex Dirac bound");
  return std::sqrt(-4.0 * kPi * degree / (rank * volume));
}

double bound_dirac_real(int genus, int degree, int rank, double volume) {
  check_common(rank, volume);
  if (genus < 0) {
    throw InvalidParameter("genus must be nonnegative");
  }
  const double radicand = 4.0 * kPi * (1.0 - genus) / volume - 4.0 * kPi * degree / (rank * volume);
  if (radicand < 0.0) {
    throw DomainError("the real Dirac bound has a negative radicand " + std::to_string(radicand));
  }
  return std::sqrt(radicand);
}

std::vector<double> sphere_dirac_spectrum(double scalar_curvature, int degL, int q_max) {
  check_curvature(scalar_curvature);
  check_count(q_max);
  if (degL > 0) {
    throw DomainError("sphere Dirac spectrum needs deg L <= 0, got " + std::to_string(degL));
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(q_max) + 1);
  for (int q = 0; q <= q_max; ++q) {
    const double p = q + 1.0;
    out.push_back(std::sqrt(0.5 * scalar_curvature * (p * p - p * degL)));
  }
  return out;
}

std::vector<double> sphere_dolbeault_spectrum(double scalar_curvature, int degree, int q_max) {
  check_curvature(scalar_curvature);
  check_count(q_max);
  need_negative(degree, "sphere Dolbeault spectrum");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(q_max) + 1);
  for (int q = 0; q <= q_max; ++q) {
    const double p = q + 1.0;
    out.push_back(0.25 * scalar_curvature * (p * p - p * (1.0 + degree)));
  }
  return out;
}

std::vector<Cluster> torus_dolbeault_spectrum(double volume, int degree, int k_max) {
  check_common(1, volume);
  check_count(k_max);
  need_negative(degree, "torus Landau spectrum");
  std::vector<Cluster> out;
  for (int k = 0; k <= k_max; ++k) {
    out.push_back({-2.0 * kPi * degree * (k + 1.0) / volume, std::abs(degree)});
  }
  return out;
}

std::vector<double> dirac_from_dolbeault(const std::vector<double>& dolbeault_values) {
  std::vector<double> out;
  for (double lambda : dolbeault_values) {
    if (lambda < 0.0 || std::isnan(lambda)) {
      throw DomainError("Dolbeault eigenvalues are nonnegative, got " + std::to_string(lambda));
    }
    if (lambda > 0.0) {
      out.push_back(std::sqrt(2.0 * lambda));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace twistlap
