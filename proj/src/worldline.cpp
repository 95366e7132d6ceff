#include "conelight/worldline.hpp"

namespace conelight {

PathPoint shell_point(const ShellPathParams& p, double u) {
  const Vec3 x = p.x1 + u * p.y;
  const double w0 = std::hypot(p.tau, norm(x));
  const double xy = dot(x, p.y), yy = dot(p.y, p.y);
  PathPoint out;
  out.z = {w0, x};
  out.v = {xy / w0, p.y};
  // d/du (x.y / w0) = (|y|^2 w0^2 - (x.y)^2) / w0^3, nonnegative by Cauchy-Schwarz.
  out.acc = {(yy * w0 * w0 - xy * xy) / (w0 * w0 * w0), {0.0, 0.0, 0.0}};
  return out;
}

FourVector shell_path(const ShellPathParams& p, double u) { return shell_point(p, u).z; }
FourVector shell_velocity(const ShellPathParams& p, double u) { return shell_point(p, u).v; }

PathPoint mirror_point(const ShellPathParams& p, double u) {
  if (u > 0.0) throw DomainError("mirror branch is defined for u <= 0");
  PathPoint out = shell_point(p, u);
  out.z.t = -out.z.t;
  out.v.t = -out.v.t;
  out.acc.t = -out.acc.t;
  return out;
}

FourVector mirror_path(const ShellPathParams& p, double u) { return mirror_point(p, u).z; }
FourVector mirror_velocity(const ShellPathParams& p, double u) { return mirror_point(p, u).v; }

FourVector merged_path(const ShellPathParams& p, double u) {
  if (u >= 1.0) return shell_path(p, u);
  if (u <= -1.0) return mirror_path(p, u);
  const FourVector hi = shell_path(p, 1.0), lo = mirror_path(p, -1.0);
  return 0.5 * ((hi + lo) + u * (hi - lo));
}

FourVector merged_velocity(const ShellPathParams& p, double u) {
  // At the contact points the one-sided velocity of the outer branch is returned.
  if (u >= 1.0) return shell_velocity(p, u);
  if (u <= -1.0) return mirror_velocity(p, u);
  return 0.5 * (shell_path(p, 1.0) - mirror_path(p, -1.0));
}

AsymptoticData asymptotic_data(const ShellPathParams& p) {
  const double ny = norm(p.y);
  if (!(ny > 0.0)) throw DomainError("asymptotic_data: direction y must be nonzero");
  const double xy = dot(p.x1, p.y), xx = dot(p.x1, p.x1);
  AsymptoticData d;
  d.l = {ny, p.y};
  d.r = {xy / ny, p.x1};
  d.a = {0.5 * ((p.tau * p.tau + xx) / ny - xy * xy / (ny * ny * ny)), {0.0, 0.0, 0.0}};
  return d;
}

}  // namespace conelight
