#pragma once

#include <vector>

#include "conelight/quadrature.hpp"
#include "conelight/spacetime.hpp"

namespace conelight {

// Bump b(t, x) = mollifier(sqrt(t^2 + |x|^2) / a), radial in Euclidean four-space, and the
// solutions of the massless wave equation it generates. With the commutator kernel
// K = G_ret - G_adv, G_ret(x) = delta(t - |x|) / (4 pi |x|), null coordinates give
//   (K * b)(t, R) = [F(t + R) - F(t - R)] / (4 R),
//   F(A) = \int_{-inf}^A g,  g(alpha) = (alpha / 2) \int dbeta b-profile at radius sqrt((alpha^2 + beta^2) / 2),
// and F vanishes outside [-L, L] with L = sqrt(2) a.
class WaveBump {
 public:
  // F tables use `nodes` points on [-L, L]; the Fourier table covers k <= k_cut / a.
  explicit WaveBump(double a, int nodes = 2049, double k_cut = 300.0, int k_nodes = 8193);

  double radius() const { return a_; }
  double null_extent() const { return L_; }

  double profile(double t, double R) const;
  // (2 pi)^-2 \int d^4x e^{i k x} b for a Euclidean wave number k; on the light cone k = sqrt(2) |p|.
  // Interpolated from a Hermite table below the cut, Hankel quadrature above it.
  double fourier(double k) const;
  // The same by Gauss quadrature of the Hankel form k^-1 \int rho^2 J_1(k rho) b(rho) drho.
  double fourier_hankel(double k) const;
  double fourier_cut() const { return k_max_; }
  // (K * b)(t, R) with R the distance from the bump centre.
  double commutator(double t, double R) const;
  // R^-2 \int_0^R rho^2 (K * b)(t, rho) drho: the radial field of the charge K * b inside radius R.
  double enclosed(double t, double R) const;

  // F and its first two antiderivatives (all from -inf).
  double F(double A) const;
  double F1(double A) const;
  double F2(double A) const;
  double g(double alpha) const;

 private:
  double a_, L_;
  CubicHermite F_, F1_, F2_;
  double F1_end_ = 0.0, F2_end_ = 0.0;
  // B(k) = \int dt e^{ikt} S(t) with S(t) = (2 pi)^-2 \int d^3x b(t, x); Gauss nodes and weights times S.
  std::vector<double> tx_, tw_;
  double k_max_ = 0.0;
  CubicHermite B_;
};

// Shared instance per radius with default tables; safe to call concurrently.
const WaveBump& wave_bump(double a);

}  // namespace conelight
