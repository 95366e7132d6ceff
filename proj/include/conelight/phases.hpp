#pragma once

#include <vector>

#include "conelight/fourier.hpp"
#include "conelight/weyl.hpp"

namespace conelight {

// Automorphism phases of the smeared path currents, computed in position space:
//   phi_m(f) = (1 / 2 pi) \int d^4x m(x) . eta . (K * f)(x),
// the same sign as automorphism_phase. For m built from charge samples this is
//   (1 / 2 pi) E[weight \int du z'(u) . eta . (K * f)(z(u))],
// and K * f vanishes off the null cones of the bumps, so the u-integral only runs
// over the stretches where a path crosses such a cone.
struct PathPhaseOptions {
  QuadratureConfig q;   // QMC samples, replicates and seed for the charge average
  int order = 8;        // Gauss points per u panel
  double panel = 0.25;  // panel width as a fraction of the null extent over the path speed
};

// Smallest s >= 1 such that every point of the support of d m_s / ds (proper time in the
// theta0 window, |x| >= s R - r) is spacelike to every ball of f. Requires balls inside V+.
double constancy_threshold(const ChargeConfig& c, const TestField& f);

// (1 / 2 pi) \int_{u0}^{u1} du z'(u) . eta . (K * f)(z(u)) for one path, without smearing;
// `speed` must bound |dz0/du| + |dz/du| on the range.
double phase_path(const PathFunction& path, double u0, double u1, double speed, const TestField& f,
                  const PathPhaseOptions& o = {});
// phi_{m_s}(f) for the path family u in [0, s]; f must be a bump sum.
PairingValue phase_m_s(const ChargeConfig& c, double s, const TestField& f, const PathPhaseOptions& o = {});
// The s -> infinity limit: the shell paths contribute nothing beyond the constancy threshold.
PairingValue phase_m_infinity(const ChargeConfig& c, const TestField& f, const PathPhaseOptions& o = {});
// phi_{m_reg}(f) for the merged paths. The mirror branches lie in the backward cone, which is
// timelike to balls in V+, so only the segment and the shell branch are integrated.
PairingValue phase_m_reg(const ChargeConfig& c, const TestField& f, const PathPhaseOptions& o = {});
// phi_{grad Lap^-1 rho_s}(f) = (1 / 2 pi) \int d^4x rho_s(x) eps . e_R E(x), with E the radial field
// of the charge K * b around each bump centre. s = 0 selects rho_0.
PairingValue phase_grad_rho(const ChargeConfig& c, double s, const TestField& f, const PathPhaseOptions& o = {});

}  // namespace conelight
