#pragma once

#include <string_view>

namespace twistlap {

enum class SurfaceKind { Sphere, Torus };

std::string_view to_string(SurfaceKind kind);

/// Constant-curvature base surface. Immutable once built; construct through
/// make_sphere / make_torus so the Gauss-Bonnet relation always holds.
class SurfaceGeometry {
 public:
  SurfaceKind kind() const noexcept { return kind_; }
  double volume() const noexcept { return volume_; }
  double scalar_curvature() const noexcept { return scalar_curvature_; }
  int genus() const noexcept { return genus_; }

  /// Sphere radius with R = 2 / radius^2.  Only meaningful for spheres.
  double radius() const;
  /// Side of the square fundamental domain.  Only meaningful for tori.
  double side() const;

  friend SurfaceGeometry make_sphere(double scalar_curvature);
  friend SurfaceGeometry make_torus(double volume);

  friend bool operator==(const SurfaceGeometry&, const SurfaceGeometry&) = default;

 private:
  SurfaceGeometry(SurfaceKind kind, double volume, double scalar_curvature, int genus)
      : kind_(kind), volume_(volume), scalar_curvature_(scalar_curvature), genus_(genus) {}

  SurfaceKind kind_;
  double volume_;
  double scalar_curvature_;
  int genus_;
};

/// Round sphere of scalar curvature R > 0; area 8*pi/R.
SurfaceGeometry make_sphere(double scalar_curvature);

/// Flat square torus of the given area.
SurfaceGeometry make_torus(double volume);

}  // namespace twistlap
