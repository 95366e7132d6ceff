#pragma once

#include "conelight/spacetime.hpp"

namespace conelight {

// Path on the time shell of proper time tau through x1 in direction y.
struct ShellPathParams {
  double tau = 1.0;
  Vec3 x1{0.0, 0.0, 0.0};
  Vec3 y{1.0, 0.0, 0.0};
};

struct AsymptoticData {
  FourVector l;  // light-like direction (|y|, y)
  FourVector r;  // space-like offset orthogonal to l
  FourVector a;  // positive time-like coefficient of 1/u
};

// Position, velocity and acceleration at one parameter value.
struct PathPoint {
  FourVector z, v, acc;
};

FourVector shell_path(const ShellPathParams& p, double u);
FourVector shell_velocity(const ShellPathParams& p, double u);
PathPoint shell_point(const ShellPathParams& p, double u);

// Time-reflected branch in the backward cone, u <= 0.
FourVector mirror_path(const ShellPathParams& p, double u);
FourVector mirror_velocity(const ShellPathParams& p, double u);
PathPoint mirror_point(const ShellPathParams& p, double u);

// Three-piece path: mirror branch (u <= -1), straight segment, shell branch (u >= 1).
FourVector merged_path(const ShellPathParams& p, double u);
FourVector merged_velocity(const ShellPathParams& p, double u);

AsymptoticData asymptotic_data(const ShellPathParams& p);

}  // namespace conelight
