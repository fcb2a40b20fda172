#include <cmath>
#include <numbers>
#include <vector>

#include "twistlap/errors.hpp"
#include "twistlap/operators.hpp"

namespace twistlap {

namespace {

using Triplet = Eigen::Triplet<Complex>;

int site(int i, int j, int n) { return ((i % n + n) % n) + n * ((j % n + n) % n); }

void check_links(const TorusLinks& links) {
  const auto sites = static_cast<std::size_t>(links.n) * static_cast<std::size_t>(links.n);
  if (links.n < 1 || links.ux.size() != sites || links.uy.size() != sites) {
    throw InvalidParameter("torus links do not match their grid size");
  }
}

}  // namespace

TorusLinks landau_links(int grid_size, int degree) {
  if (grid_size < 1) {
    throw InvalidParameter("torus grid size must be positive");
  }
  const int n = grid_size;
  // Holonomy e^{i step} per plaquette with step = -2 pi d / N^2, i.e. flux
  // 2 pi d / N^2 in the convention i Lambda F = c.
  const double step = -2.0 * std::numbers::pi * degree / (static_cast<double>(n) * n);
  TorusLinks links{n, std::vector<Complex>(static_cast<std::size_t>(n) * n),
                   std::vector<Complex>(static_cast<std::size_t>(n) * n)};
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const auto p = static_cast<std::size_t>(site(i, j, n));
      links.uy[p] = std::polar(1.0, step * i);
      links.ux[p] = i < n - 1 ? Complex(1.0, 0.0) : std::polar(1.0, -step * n * j);
    }
  }
  return links;
}

TorusLinks gauge_transform(const TorusLinks& links, const std::vector<Complex>& gauge) {
  check_links(links);
  if (gauge.size() != links.ux.size()) {
    throw InvalidParameter("gauge function does not match the grid");
  }
  const int n = links.n;
  TorusLinks out = links;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const auto p = static_cast<std::size_t>(site(i, j, n));
      const auto px = static_cast<std::size_t>(site(i + 1, j, n));
      const auto py = static_cast<std::size_t>(site(i, j + 1, n));
      out.ux[p] = gauge[p] * links.ux[p] * std::conj(gauge[px]);
      out.uy[p] = gauge[p] * links.uy[p] * std::conj(gauge[py]);
    }
  }
  return out;
}

std::vector<Complex> plaquette_holonomies(const TorusLinks& links) {
  check_links(links);
  const int n = links.n;
  std::vector<Complex> out(links.ux.size());
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const auto p = static_cast<std::size_t>(site(i, j, n));
      const auto px = static_cast<std::size_t>(site(i + 1, j, n));
      const auto py = static_cast<std::size_t>(site(i, j + 1, n));
      out[p] = links.ux[p] * links.uy[px] * std::conj(links.ux[py]) * std::conj(links.uy[p]);
    }
  }
  return out;
}

OperatorSet assemble_torus_from_links(const SurfaceGeometry& geometry, const BundleSpec& bundle,
                                      const TorusLinks& links) {
  if (geometry.kind() != SurfaceKind::Torus) {
    throw InvalidParameter("assemble_torus needs a torus geometry");
  }
  check_links(links);
  const int n = links.n;
  const int sites = n * n;
  const double h = geometry.side() / n;
  const double inv_h = 1.0 / h;

  // Forward covariant differences (S - 1)/h and backward ones (1 - S^H)/h.
  std::vector<Triplet> fx, fy, bx, by;
  for (auto* v : {&fx, &fy, &bx, &by}) {
    v->reserve(2 * static_cast<std::size_t>(sites));
  }
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int p = site(i, j, n);
      const int px = site(i + 1, j, n);
      const int py = site(i, j + 1, n);
      const int mx = site(i - 1, j, n);
      const int my = site(i, j - 1, n);
      const auto up = static_cast<std::size_t>(p);
      fx.emplace_back(p, p, -inv_h);
      fx.emplace_back(p, px, links.ux[up] * inv_h);
      fy.emplace_back(p, p, -inv_h);
      fy.emplace_back(p, py, links.uy[up] * inv_h);
      bx.emplace_back(p, p, inv_h);
      bx.emplace_back(p, mx, -std::conj(links.ux[static_cast<std::size_t>(mx)]) * inv_h);
      by.emplace_back(p, p, inv_h);
      by.emplace_back(p, my, -std::conj(links.uy[static_cast<std::size_t>(my)]) * inv_h);
    }
  }
  auto build = [sites](const std::vector<Triplet>& t) {
    SparseMatrix out(sites, sites);
    out.setFromTriplets(t.begin(), t.end());
    return out;
  };
  const SparseMatrix dxf = build(fx);
  const SparseMatrix dyf = build(fy);
  const SparseMatrix dxb = build(bx);
  const SparseMatrix dyb = build(by);

  // dbar stacks the forward and backward discretisations of
  // (nabla_x + i nabla_y)/sqrt(2), each carrying half the weight.
  const Complex i_unit(0.0, 1.0);
  const SparseMatrix fwd = 0.5 * (dxf + i_unit * dyf);
  const SparseMatrix bwd = 0.5 * (dxb + i_unit * dyb);
  std::vector<Triplet> stacked;
  stacked.reserve(static_cast<std::size_t>(fwd.nonZeros() + bwd.nonZeros()));
  for (int r = 0; r < sites; ++r) {
    for (SparseMatrix::InnerIterator it(fwd, r); it; ++it) {
      stacked.emplace_back(it.row(), it.col(), it.value());
    }
    for (SparseMatrix::InnerIterator it(bwd, r); it; ++it) {
      stacked.emplace_back(sites + it.row(), it.col(), it.value());
    }
  }
  SparseMatrix dbar(2 * sites, sites);
  dbar.setFromTriplets(stacked.begin(), stacked.end());

  const double cell = h * h;
  const RealVector w_sites = RealVector::Constant(sites, cell);

  RealVector flux(sites);
  const std::vector<Complex> hol = plaquette_holonomies(links);
  for (int p = 0; p < sites; ++p) {
    flux[p] = -std::arg(hol[static_cast<std::size_t>(p)]);
  }

  return OperatorSet{
      .geometry = geometry,
      .bundle = bundle,
      .backend = TorusGrid{},
      .grid_size = n,
      .dbar = std::move(dbar),
      .grad = {dxf, dyf},
      .weights_sec = w_sites,
      .weights_form = RealVector::Constant(2 * sites, cell),
      .weights_grad = {w_sites, w_sites},
      .he_constant = bundle.he_constant,
      .cell_flux = std::move(flux),
      .cell_area = w_sites,
  };
}

OperatorSet assemble_torus(const SurfaceGeometry& geometry, const BundleSpec& bundle,
                           int grid_size) {
  if (geometry.kind() != SurfaceKind::Torus) {
    throw InvalidParameter("assemble_torus needs a torus geometry");
  }
  require_numeric_bundle(bundle);
  if (grid_size < 8) {
    throw InvalidParameter("torus grid needs N >= 8");
  }
  return assemble_torus_from_links(geometry, bundle, landau_links(grid_size, bundle.degree));
}

}  // namespace twistlap
