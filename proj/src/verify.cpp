#include "twistlap/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

#include "twistlap/bundle.hpp"
#include "twistlap/errors.hpp"
#include "twistlap/operators.hpp"
#include "twistlap/parallel.hpp"

namespace twistlap {

namespace {

constexpr int kSphereSlackGrid = 400;

HermitianOperator build(const OperatorSet& ops, OperatorKind op) {
  switch (op) {
    case OperatorKind::Dolbeault:
      return dolbeault_laplacian(ops);
    case OperatorKind::Trace:
      return trace_laplacian(ops);
    case OperatorKind::Dirac:
      return dirac_block(ops);
  }
  throw InvalidParameter("unknown operator kind");
}

struct Entry {
  double value;
  double residual;
  int mode;
  Eigen::Index column;
};

LowSpectrum sphere_low(const SurfaceGeometry& geometry, int degree, OperatorKind op,
                       const VerifyConfig& config) {
  const int n = effective_grid(geometry.kind(), config.grid);
  const BundleSpec bundle = make_bundle(geometry, degree);
  const auto [lo, hi] = default_mode_range(degree, config.k);
  const auto count = static_cast<std::size_t>(hi - lo + 1);

  std::vector<Spectrum> per_mode(count);
  parallel_for(count, [&](std::size_t i) {
    const int m = lo + static_cast<int>(i);
    const OperatorSet ops = assemble_sphere_mode(geometry, bundle, m, n);
    const HermitianOperator a = build(ops, op);
    SolveOptions opts;
    opts.k = static_cast<int>(std::min<Eigen::Index>(config.k, a.dim()));
    opts.tol = config.tol;
    opts.seed = config.seed;
    if (op == OperatorKind::Dirac) {
      // Drop the kernel; the scale keeps the cut far below the first level.
      opts.lower_bound = 1e-7 * std::max(1.0, std::sqrt(std::abs(bundle.he_constant)));
    }
    per_mode[i] = smallest_eigs(a, opts);
  });

  std::vector<Entry> all;
  for (std::size_t i = 0; i < count; ++i) {
    const Spectrum& s = per_mode[i];
    for (std::size_t j = 0; j < s.eigenvalues.size(); ++j) {
      all.push_back({s.eigenvalues[j], s.residuals[j], lo + static_cast<int>(i),
                     static_cast<Eigen::Index>(j)});
    }
  }
  std::stable_sort(all.begin(), all.end(), [](const Entry& a, const Entry& b) {
    return std::tie(a.value, a.mode) < std::tie(b.value, b.mode);
  });
  if (all.size() > static_cast<std::size_t>(config.k)) {
    all.resize(static_cast<std::size_t>(config.k));
  }
  if (all.empty()) {
    throw ConvergenceError("no eigenvalues in the requested range", 0.0);
  }

  LowSpectrum out;
  out.grid = n;
  out.mode_min = lo;
  out.mode_max = hi;
  out.method = per_mode.front().method;
  for (const Entry& e : all) {
    out.values.push_back(e.value);
    out.residuals.push_back(e.residual);
    out.modes.push_back(e.mode);
  }
  const Spectrum& ground = per_mode[static_cast<std::size_t>(all.front().mode - lo)];
  out.ground_vector = ground.vectors->col(all.front().column);
  out.clusters = cluster_values(out.values, config.cluster_tol);
  return out;
}

LowSpectrum torus_low(const SurfaceGeometry& geometry, int degree, OperatorKind op,
                      const VerifyConfig& config) {
  const int n = effective_grid(geometry.kind(), config.grid);
  const OperatorSet ops = assemble_torus(geometry, make_bundle(geometry, degree), n);
  const bool lemma = op == OperatorKind::Dirac;
  const HermitianOperator a = build(ops, lemma ? OperatorKind::Dolbeault : op);
  SolveOptions opts;
  opts.k = config.k;
  opts.tol = config.tol;
  opts.seed = config.seed;
  const Spectrum s = smallest_eigs(a, opts);

  LowSpectrum out;
  out.grid = n;
  out.method = lemma ? s.method + "+lemma" : s.method;
  out.values = lemma ? dirac_from_dolbeault(s.eigenvalues) : s.eigenvalues;
  out.residuals = s.residuals;
  out.residuals.resize(out.values.size());
  out.modes.assign(out.values.size(), 0);
  out.ground_vector = s.vectors->col(0);
  out.clusters = cluster_values(out.values, config.cluster_tol);
  return out;
}

double max_residual(const LowSpectrum& s) {
  return s.residuals.empty() ? 0.0 : *std::max_element(s.residuals.begin(), s.residuals.end());
}

// Weitzenbock residual over the modes carrying the ground level on the
// sphere, or the single torus grid.
double ground_weitzenbock(const SurfaceGeometry& geometry, int degree, int n,
                          const VerifyConfig& config) {
  const BundleSpec bundle = make_bundle(geometry, degree);
  WeitzenbockProbe probe;
  probe.seed = config.seed;
  if (geometry.kind() == SurfaceKind::Torus) {
    return weitzenbock_residual(assemble_torus(geometry, bundle, n), probe);
  }
  const auto count = static_cast<std::size_t>(-degree + 1);
  std::vector<double> res(count);
  parallel_for(count, [&](std::size_t i) {
    const int m = degree + static_cast<int>(i);
    res[i] = weitzenbock_residual(assemble_sphere_mode(geometry, bundle, m, n), probe);
  });
  return *std::max_element(res.begin(), res.end());
}

OperatorSet ground_operators(const SurfaceGeometry& geometry, int degree, const LowSpectrum& s) {
  const BundleSpec bundle = make_bundle(geometry, degree);
  if (geometry.kind() == SurfaceKind::Torus) {
    return assemble_torus(geometry, bundle, s.grid);
  }
  return assemble_sphere_mode(geometry, bundle, s.modes.front(), s.grid);
}

BoundReport make_report(BoundKind kind, const SurfaceGeometry& geometry, int degree,
                        int effective_degree, double bound, const LowSpectrum& s,
                        const VerifyConfig& config, bool expect_sharp) {
  const int n = s.grid;
  BoundReport r{.bound_kind = kind, .geometry = geometry};
  r.degree = degree;
  r.effective_degree = effective_degree;
  r.oracle_bound = bound;
  r.computed_min = s.values.front();
  r.relative_gap = (r.computed_min - bound) / std::abs(bound);
  r.numeric_slack = config.numeric_slack > 0.0 ? config.numeric_slack
                                               : default_numeric_slack(geometry.kind(), n);
  r.sharp_tol = config.sharp_tol > 0.0 ? config.sharp_tol : default_sharp_tol(geometry.kind(), n);
  r.expect_sharp = expect_sharp;
  r.sharp = expect_sharp && std::abs(r.relative_gap) <= r.sharp_tol;
  r.satisfied = r.relative_gap >= -r.numeric_slack;
  r.grid = n;
  r.mode_min = s.mode_min;
  r.mode_max = s.mode_max;
  r.solver_residual = max_residual(s);
  r.ground_multiplicity = s.clusters.empty() ? 0 : s.clusters.front().multiplicity;
  r.method = s.method;
  return r;
}

void check_degree(int degree) {
  if (degree >= 0) {
    throw DomainError("verification needs negative degree, got " + std::to_string(degree));
  }
}

}  // namespace

std::string_view to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::Dolbeault:
      return "dolbeault";
    case OperatorKind::Trace:
      return "trace";
    case OperatorKind::Dirac:
      return "dirac";
  }
  return "unknown";
}

std::string_view to_string(Theorem theorem) {
  switch (theorem) {
    case Theorem::Main:
      return "main";
    case Theorem::Cor1:
      return "cor1";
    case Theorem::Cor2:
      return "cor2";
  }
  return "unknown";
}

std::string_view to_string(ConvergenceTarget target) {
  return target == ConvergenceTarget::GroundEig ? "ground_eig" : "weitzenbock_residual";
}

int reference_grid(SurfaceKind kind) { return kind == SurfaceKind::Sphere ? 800 : 64; }

int effective_grid(SurfaceKind kind, int grid) { return grid > 0 ? grid : reference_grid(kind); }

double default_numeric_slack(SurfaceKind kind, int grid) {
  const double ref = kind == SurfaceKind::Sphere ? kSphereSlackGrid : 64.0;
  const double base = kind == SurfaceKind::Sphere ? 5e-3 : 2e-2;
  const double s = ref / grid;
  return base * s * s;
}

double default_sharp_tol(SurfaceKind kind, int grid) {
  const double ref = kind == SurfaceKind::Sphere ? kSphereSlackGrid : 64.0;
  return 1e-2 * ref / grid;
}

LowSpectrum low_spectrum(const SurfaceGeometry& geometry, int degree, OperatorKind op,
                         const VerifyConfig& config) {
  if (config.k < 1) {
    throw InvalidParameter("k must be positive");
  }
  if (!(config.tol > 0.0) || !(config.cluster_tol > 0.0)) {
    throw InvalidParameter("tolerances must be positive");
  }
  return geometry.kind() == SurfaceKind::Sphere ? sphere_low(geometry, degree, op, config)
                                                : torus_low(geometry, degree, op, config);
}

BoundReport verify_main_theorem(const SurfaceGeometry& geometry, int degree,
                                const VerifyConfig& config) {
  check_degree(degree);
  const double vol = geometry.volume();
  const double bound = bound_dolbeault_main(1, degree, 1, vol);
  const LowSpectrum s = low_spectrum(geometry, degree, OperatorKind::Dolbeault, config);
  BoundReport r = make_report(BoundKind::MainDolbeault, geometry, degree, degree, bound, s, config,
                              /*expect_sharp=*/true);
  r.naive_bound = bound_dolbeault_naive(1, degree, 1, vol);
  r.naive_ratio = r.computed_min / *r.naive_bound;
  if (config.diagnostics) {
    r.weitzenbock_residual = ground_weitzenbock(geometry, degree, s.grid, config);
    const OperatorSet ops = ground_operators(geometry, degree, s);
    const double allowed = std::max(1e-8, 10.0 * config.tol);
    r.sharpness_defect = sharpness_defect(ops, *s.ground_vector, s.values.front(), 1, allowed);
  }
  return r;
}

BoundReport verify_cor1(const SurfaceGeometry& geometry, int degree, const VerifyConfig& config) {
  check_degree(degree);
  if (geometry.kind() != SurfaceKind::Sphere) {
    throw InvalidParameter("the complex Dirac check runs on the sphere only");
  }
  const double bound = bound_dirac_complex(degree, 1, geometry.volume());
  const LowSpectrum direct = low_spectrum(geometry, degree, OperatorKind::Dirac, config);
  const LowSpectrum dolb = low_spectrum(geometry, degree, OperatorKind::Dolbeault, config);
  BoundReport r = make_report(BoundKind::ComplexDirac, geometry, degree, degree, bound, direct,
                              config, /*expect_sharp=*/true);
  r.lemma_value = dirac_from_dolbeault({dolb.values.front()}).front();
  r.cross_check = std::abs(r.computed_min - *r.lemma_value);
  return r;
}

BoundReport verify_cor2(const SurfaceGeometry& geometry, int degree, const VerifyConfig& config) {
  check_degree(degree);
  const int genus = geometry.genus();
  const double vol = geometry.volume();
  const int shifted = half_canonical_twist_degree(degree, 1, genus);
  const double bound = bound_dirac_real(genus, degree, 1, vol);
  const LowSpectrum s = low_spectrum(geometry, shifted, OperatorKind::Dirac, config);
  BoundReport r = make_report(BoundKind::RealDirac, geometry, degree, shifted, bound, s, config,
                              /*expect_sharp=*/true);
  const double radicand =
      0.5 * geometry.scalar_curvature() - 4.0 * std::numbers::pi * degree / vol;
  if (radicand >= 0.0) {
    r.second_bound = std::sqrt(radicand);
  }
  if (geometry.kind() == SurfaceKind::Sphere) {
    const LowSpectrum dolb = low_spectrum(geometry, shifted, OperatorKind::Dolbeault, config);
    r.lemma_value = dirac_from_dolbeault({dolb.values.front()}).front();
    r.cross_check = std::abs(r.computed_min - *r.lemma_value);
  }
  return r;
}

std::vector<BoundReport> verify_sweep(const SurfaceGeometry& geometry,
                                      std::vector<SweepItem> items, const VerifyConfig& config) {
  std::sort(items.begin(), items.end(), [](const SweepItem& a, const SweepItem& b) {
    return std::make_tuple(static_cast<int>(a.theorem), -a.degree, a.grid) <
           std::make_tuple(static_cast<int>(b.theorem), -b.degree, b.grid);
  });
  std::vector<std::optional<BoundReport>> slots(items.size());
  parallel_for(items.size(), [&](std::size_t i) {
    VerifyConfig c = config;
    c.grid = items[i].grid;
    switch (items[i].theorem) {
      case Theorem::Main:
        slots[i] = verify_main_theorem(geometry, items[i].degree, c);
        break;
      case Theorem::Cor1:
        slots[i] = verify_cor1(geometry, items[i].degree, c);
        break;
      case Theorem::Cor2:
        slots[i] = verify_cor2(geometry, items[i].degree, c);
        break;
    }
  });
  std::vector<BoundReport> out;
  out.reserve(slots.size());
  for (auto& s : slots) {
    out.push_back(std::move(*s));
  }
  return out;
}

ConvergenceTable convergence_study(const SurfaceGeometry& geometry, int degree,
                                   const std::vector<int>& grids, ConvergenceTarget target,
                                   const VerifyConfig& config) {
  check_degree(degree);
  if (grids.size() < 3) {
    throw InvalidParameter("a convergence study needs at least three grids");
  }
  if (!std::is_sorted(grids.begin(), grids.end(), std::less_equal<>()) ||
      std::adjacent_find(grids.begin(), grids.end()) != grids.end()) {
    throw InvalidParameter("grid sizes must be strictly increasing");
  }

  const double oracle = target == ConvergenceTarget::GroundEig
                            ? bound_dolbeault_main(1, degree, 1, geometry.volume())
                            : 0.0;
  std::vector<ConvergenceRow> rows(grids.size());
  parallel_for(grids.size(), [&](std::size_t i) {
    VerifyConfig c = config;
    c.grid = grids[i];
    ConvergenceRow& row = rows[i];
    row.grid = grids[i];
    if (target == ConvergenceTarget::GroundEig) {
      c.k = 1;
      row.value = low_spectrum(geometry, degree, OperatorKind::Dolbeault, c).values.front();
    } else {
      row.value = ground_weitzenbock(geometry, degree, grids[i], c);
    }
    row.error = std::abs(row.value - oracle);
  });
  return summarize_convergence(target, oracle, std::move(rows));
}

ConvergenceTable summarize_convergence(ConvergenceTarget target, double oracle,
                                       std::vector<ConvergenceRow> rows) {
  ConvergenceTable table{.target = target, .oracle = oracle, .rows = std::move(rows)};
  const double floor = 1e-13 * std::max(1.0, std::abs(table.oracle));
  table.exact = std::all_of(table.rows.begin(), table.rows.end(),
                            [floor](const ConvergenceRow& r) { return r.error <= floor; });
  if (table.exact) {
    return table;
  }
  // Per-pair rates, then a least-squares slope over the rows above round-off.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int used = 0;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    ConvergenceRow& row = table.rows[i];
    if (i > 0 && row.error > floor && table.rows[i - 1].error > floor) {
      row.order = std::log(table.rows[i - 1].error / row.error) /
                  std::log(static_cast<double>(row.grid) / table.rows[i - 1].grid);
    }
    if (row.error > floor) {
      const double x = std::log(static_cast<double>(row.grid));
      const double y = -std::log(row.error);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++used;
    }
  }
  if (used >= 2) {
    table.order = (used * sxy - sx * sy) / (used * sxx - sx * sx);
  }
  return table;
}

}  // namespace twistlap
