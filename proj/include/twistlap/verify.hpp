#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "twistlap/eigensolve.hpp"
#include "twistlap/geometry.hpp"
#include "twistlap/oracle.hpp"

namespace twistlap {

enum class OperatorKind { Dolbeault, Trace, Dirac };

std::string_view to_string(OperatorKind kind);

struct VerifyConfig {
  int grid = 0;  ///< 0 picks the reference grid: 800 on the sphere, 64 on the torus
  int k = 6;
  double tol = 1e-8;
  std::uint64_t seed = 0;
  double cluster_tol = 1e-3;
  /// <= 0 means the grid-scaled defaults below.
  double sharp_tol = 0.0;
  double numeric_slack = 0.0;
  bool diagnostics = true;  ///< Weitzenbock residual and sharpness defect
};

int reference_grid(SurfaceKind kind);
int effective_grid(SurfaceKind kind, int grid);

/// sphere 5e-3 (400/N)^2, torus 2e-2 (64/N)^2; relative to |bound|.
double default_numeric_slack(SurfaceKind kind, int grid);
/// 1e-2 at the reference grid (400 sphere, 64 torus), halved per doubling.
double default_sharp_tol(SurfaceKind kind, int grid);

/// Low spectrum of one operator.  On the sphere it is the union over the
/// azimuthal modes of `modes`; on the torus a single grid solve.  Dirac
/// spectra keep only the positive eigenvalues.  On the torus the Dirac
/// spectrum comes from the Dolbeault one through mu = sqrt(2 lambda).
struct LowSpectrum {
  std::vector<double> values;     ///< ascending, k of them
  std::vector<double> residuals;  ///< matching solver residuals
  std::vector<int> modes;         ///< sphere azimuthal mode of each value; 0 on the torus
  std::vector<Cluster> clusters;
  int grid = 0;
  int mode_min = 0;
  int mode_max = 0;
  std::string method;
  /// Ground eigenvector (coefficients) and its mode, for diagnostics.
  std::optional<Vector> ground_vector;
};

LowSpectrum low_spectrum(const SurfaceGeometry& geometry, int degree, OperatorKind op,
                         const VerifyConfig& config);

struct BoundReport {
  BoundKind bound_kind;
  SurfaceGeometry geometry;
  int degree = 0;
  int effective_degree = 0;  ///< degree of the bundle actually discretised
  double oracle_bound = 0.0;
  double computed_min = 0.0;
  double relative_gap = 0.0;
  bool sharp = false;
  bool expect_sharp = false;
  bool satisfied = false;
  double numeric_slack = 0.0;
  double sharp_tol = 0.0;
  int grid = 0;
  int mode_min = 0;
  int mode_max = 0;
  double solver_residual = 0.0;
  int ground_multiplicity = 0;
  std::string method;

  std::optional<double> naive_bound;
  std::optional<double> naive_ratio;  ///< computed_min / naive bound
  std::optional<double> weitzenbock_residual;
  std::optional<double> sharpness_defect;
  std::optional<double> lemma_value;  ///< Dirac minimum via sqrt(2 lambda_min)
  std::optional<double> cross_check;  ///< |direct - lemma_value|
  std::optional<double> second_bound; ///< sqrt(R0/2 - 4 pi d/(rk vol))
};

BoundReport verify_main_theorem(const SurfaceGeometry& geometry, int degree,
                                const VerifyConfig& config);
/// Sphere only.
BoundReport verify_cor1(const SurfaceGeometry& geometry, int degree, const VerifyConfig& config);
BoundReport verify_cor2(const SurfaceGeometry& geometry, int degree, const VerifyConfig& config);

enum class Theorem { Main, Cor1, Cor2 };
std::string_view to_string(Theorem theorem);

struct SweepItem {
  Theorem theorem;
  int degree;
  int grid;
};

/// Runs every item (possibly concurrently) and returns the reports sorted by
/// (theorem, degree descending, grid).
std::vector<BoundReport> verify_sweep(const SurfaceGeometry& geometry,
                                      std::vector<SweepItem> items, const VerifyConfig& config);

enum class ConvergenceTarget { GroundEig, WeitzenbockResidual };
std::string_view to_string(ConvergenceTarget target);

struct ConvergenceRow {
  int grid = 0;
  double value = 0.0;
  double error = 0.0;  ///< |value - oracle|; the residual itself for the Weitzenbock target
  std::optional<double> order;  ///< log2-type rate against the previous row
};

struct ConvergenceTable {
  ConvergenceTarget target;
  double oracle = 0.0;
  std::vector<ConvergenceRow> rows;
  std::optional<double> order;  ///< least-squares slope of -log(error) vs log(N)
  bool exact = false;           ///< every error at round-off level
};

/// Orders and the "exact" flag for rows whose value/error are filled in.
ConvergenceTable summarize_convergence(ConvergenceTarget target, double oracle,
                                       std::vector<ConvergenceRow> rows);

ConvergenceTable convergence_study(const SurfaceGeometry& geometry, int degree,
                                   const std::vector<int>& grids, ConvergenceTarget target,
                                   const VerifyConfig& config);

}  // namespace twistlap
