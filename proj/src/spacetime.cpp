#include "conelight/spacetime.hpp"

namespace conelight {

Vec3 normalized(const Vec3& a) {
  const double n = norm(a);
  if (!(n > 0.0)) throw DomainError("cannot normalize a zero vector");
  return (1.0 / n) * a;
}

void orthonormal_frame(const Vec3& n, Vec3& e1, Vec3& e2) {
  // Pick the coordinate axis least aligned with n as the seed.
  Vec3 seed{0.0, 0.0, 0.0};
  int k = 0;
  for (int i = 1; i < 3; ++i)
    if (std::fabs(n[i]) < std::fabs(n[k])) k = i;
  seed[k] = 1.0;
  e1 = normalized(seed - dot(seed, n) * n);
  e2 = cross(n, e1);
}

double minkowski_dot(const FourVector& a, const FourVector& b) { return a.t * b.t - dot(a.x, b.x); }

bool in_forward_cone(const FourVector& p, const FourVector& apex) {
  const FourVector d = p - apex;
  return d.t > norm(d.x);
}

bool spacelike_separated(const FourVector& a, const FourVector& b) {
  const FourVector d = a - b;
  return minkowski_dot(d, d) < 0.0;
}

FourVector xi(const ShellCoords& c) {
  if (!(c.tau > 0.0)) throw DomainError("xi: proper time must be positive");
  return {std::hypot(c.tau, norm(c.x)), c.x};
}

ShellCoords xi_inverse(const FourVector& p) {
  if (!in_forward_cone(p)) throw DomainError("xi_inverse: point outside the open forward cone");
  const double r = norm(p.x);
  // (t - r)(t + r) avoids cancellation close to the cone.
  return {std::sqrt((p.t - r) * (p.t + r)), p.x};
}

}  // namespace conelight
