#pragma once

#include <vector>

#include "conelight/profiles.hpp"
#include "conelight/quadrature.hpp"

namespace conelight {

// The u and |y| integrals of \int_0^inf du \int dy theta1(x - u y) sigma(y) y collapse (v = u |y|) to
//   E(x) = \int de A(e) e \int_0^inf dv theta1(x - v e),
// an anisotropic Coulomb field that depends on sigma only through its angular cap A.
// E is symmetric about the cap axis d, so it has a radial and a polar component.
struct FieldComponents {
  double radial = 0.0;  // along x / |x|
  double polar = 0.0;   // along the direction of increasing angle from d
};

struct RayOrders {
  int chord_panels = 3;  // impact parameter panels (16 points each) outside the ball
  int psi = 64;          // trapezoid intervals on [0, pi] around the ray cone
  int polar = 32;        // Gauss points in the polar angle of the ray inside the ball
  int line = 32;         // Gauss points along a ray
};

// Direct evaluation by the ray representation at distance R from the ball centre and angle chi from d.
FieldComponents coulomb_ray(const ChargeConfig& c, double R, double chi, const RayOrders& o = {});
Vec3 coulomb_ray(const ChargeConfig& c, const Vec3& x, const RayOrders& o = {});

// R^2 E tabulated on zeta = R / (R + R0) in [0, 1] and chi in [0, pi] with bicubic interpolation.
// zeta = 1 holds the exact far field A(chi) * (mass of theta1).
class CoulombTable {
 public:
  explicit CoulombTable(const ChargeConfig& c, int n_zeta = 257, int n_chi = 257, const RayOrders& o = {});

  Vec3 eval(const Vec3& x) const;
  // R^2 times the field components at (zeta, chi).
  FieldComponents scaled(double zeta, double chi) const;

  double zeta_of(double R) const { return R / (R + r0_); }
  double radius_of(double zeta) const { return r0_ * zeta / (1.0 - zeta); }
  double length_scale() const { return r0_; }
  const Vec3& axis() const { return axis_; }

 private:
  double r0_;
  Vec3 axis_;
  UniformBicubic radial_, polar_;
};

}  // namespace conelight
