#include "twistlap/geometry.hpp"

#include <cmath>
#include <numbers>

#include "twistlap/errors.hpp"

namespace twistlap {

std::string_view to_string(SurfaceKind kind) {
  return kind == SurfaceKind::Sphere ? "sphere" : "torus";
}

double SurfaceGeometry::radius() const {
  if (kind_ != SurfaceKind::Sphere) {
    throw InvalidParameter("radius() is only defined for the sphere");
  }
  return std::sqrt(2.0 / scalar_curvature_);
}

double SurfaceGeometry::side() const {
  if (kind_ != SurfaceKind::Torus) {
    throw InvalidParameter("side() is only defined for the torus");
  }
  return std::sqrt(volume_);
}

SurfaceGeometry make_sphere(double scalar_curvature) {
  if (!(scalar_curvature > 0.0) || !std::isfinite(scalar_curvature)) {
    throw InvalidParameter("sphere scalar curvature must be positive and finite");
  }
  return SurfaceGeometry(SurfaceKind::Sphere, 8.0 * std::numbers::pi / scalar_curvature,
                         scalar_curvature, 0);
}

SurfaceGeometry make_torus(double volume) {
  if (!(volume > 0.0) || !std::isfinite(volume)) {
    throw InvalidParameter("torus volume must be positive and finite");
  }
  return SurfaceGeometry(SurfaceKind::Torus, volume, 0.0, 1);
}

}  // namespace twistlap
