#include <cmath>
#include <numbers>
#include <vector>

#include "twistlap/errors.hpp"
#include "twistlap/operators.hpp"

namespace twistlap {

namespace {

using Triplet = Eigen::Triplet<Complex>;

// Area of the band cos(a) - cos(b), written to stay accurate for thin bands.
double band(double a, double b) {
  return 2.0 * std::sin(0.5 * (a + b)) * std::sin(0.5 * (b - a));
}

}  // namespace

OperatorSet assemble_sphere_mode_unchecked(const SurfaceGeometry& geometry,
                                           const BundleSpec& bundle, int m, int grid_size) {
  if (geometry.kind() != SurfaceKind::Sphere) {
    throw InvalidParameter("assemble_sphere_mode needs a sphere geometry");
  }
  if (grid_size < 16) {
    throw InvalidParameter("sphere mode grid needs N >= 16");
  }
  require_numeric_bundle(bundle, /*allow_zero_degree=*/true);

  const int n = grid_size;
  const double pi = std::numbers::pi;
  const double r = geometry.radius();
  const double h = pi / n;
  const double d = bundle.degree;
  const double two_pi_r2 = 2.0 * pi * r * r;

  // Monopole potential a(theta) = (d/2)(1 - cos theta) = d sin^2(theta/2); the
  // connection along phi is d_phi - i a, so mode m sees m - a(theta).
  auto potential = [d](double theta) {
    const double s = std::sin(0.5 * theta);
    return d * s * s;
  };
  auto twist = [&](double theta) { return (m - potential(theta)) / std::sin(theta); };

  RealVector w_cell(n);
  RealVector mu_cell(n);
  RealVector flux(n);
  for (int j = 0; j < n; ++j) {
    const double lo = j * h;
    const double hi = (j + 1) * h;
    w_cell[j] = two_pi_r2 * band(lo, hi);
    mu_cell[j] = twist((j + 0.5) * h);
    flux[j] = 2.0 * pi * (potential(hi) - potential(lo));
  }

  // Faces k = 0..N; k = 0 and k = N are the polar caps.
  RealVector w_face(n + 1);
  const double cap = std::sin(0.25 * h);
  w_face[0] = two_pi_r2 * 2.0 * cap * cap;
  w_face[n] = w_face[0];
  for (int k = 1; k < n; ++k) {
    w_face[k] = two_pi_r2 * band((k - 0.5) * h, (k + 0.5) * h);
  }

  const double dbar_scale = 1.0 / (std::sqrt(2.0) * r);
  std::vector<Triplet> dbar_entries;
  std::vector<Triplet> dtheta_entries;
  dbar_entries.reserve(2 * n);
  dtheta_entries.reserve(2 * n);

  dbar_entries.emplace_back(0, 0, -mu_cell[0] * dbar_scale);
  for (int k = 1; k < n; ++k) {
    const double mu = twist(k * h);
    dbar_entries.emplace_back(k, k - 1, (-1.0 / h - 0.5 * mu) * dbar_scale);
    dbar_entries.emplace_back(k, k, (1.0 / h - 0.5 * mu) * dbar_scale);
    dtheta_entries.emplace_back(k - 1, k - 1, -1.0 / (h * r));
    dtheta_entries.emplace_back(k - 1, k, 1.0 / (h * r));
  }
  dbar_entries.emplace_back(n, n - 1, -mu_cell[n - 1] * dbar_scale);

  SparseMatrix dbar(n + 1, n);
  dbar.setFromTriplets(dbar_entries.begin(), dbar_entries.end());
  SparseMatrix dtheta(n - 1, n);
  dtheta.setFromTriplets(dtheta_entries.begin(), dtheta_entries.end());

  SparseMatrix dphi(n, n);
  dphi.reserve(Eigen::VectorXi::Constant(n, 1));
  for (int j = 0; j < n; ++j) {
    dphi.insert(j, j) = Complex(0.0, mu_cell[j] / r);
  }
  dphi.makeCompressed();

  RealVector w_inner = w_face.segment(1, n - 1);
  return OperatorSet{
      .geometry = geometry,
      .bundle = bundle,
      .backend = SphereMode{m},
      .grid_size = n,
      .dbar = std::move(dbar),
      .grad = {std::move(dtheta), std::move(dphi)},
      .weights_sec = w_cell,
      .weights_form = std::move(w_face),
      .weights_grad = {std::move(w_inner), w_cell},
      .he_constant = bundle.he_constant,
      .cell_flux = std::move(flux),
      .cell_area = w_cell,
  };
}

OperatorSet assemble_sphere_mode(const SurfaceGeometry& geometry, const BundleSpec& bundle,
                                 int m, int grid_size) {
  if (geometry.kind() != SurfaceKind::Sphere) {
    throw InvalidParameter("assemble_sphere_mode needs a sphere geometry");
  }
  require_numeric_bundle(bundle);
  return assemble_sphere_mode_unchecked(geometry, bundle, m, grid_size);
}

}  // namespace twistlap
