#pragma once

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "conelight/coulomb.hpp"
#include "conelight/fourier.hpp"

namespace conelight {

// m~perp_inf(k n) = (2 pi)^-2 \int_0^inf ds e^{iks} Gamma_n(s), where
//   Gamma_n(s) = \int dtau theta0(tau) \int d^3x delta(s - sqrt(tau^2 + x^2) + n.x) P_n E(x)
// does not depend on k. With R = |x| and mu = cos(x, n) the delta fixes mu, and
//   Gamma_n(s) = \int dtau theta0 \int_{R_min}^inf dR / R  G_n(R, mu*(tau, R, s)),
//   G_n(R, mu) = R^2 \int dphi P_n E,  R_min = |tau^2 - s^2| / (2 s).
struct GammaOrders {
  int n_zeta = 257;      // table rows in zeta = R / (R + R0)
  int n_mu = 257;        // table columns in mu
  int phi = 128;         // trapezoid points around n
  int tau = 24;          // Gauss points for the time-shell window
  int zeta_panels = 16;  // 8-point panels for the radial integral
  double h0 = 0.005;     // node spacing in s near zero
  double s_near = 0.5;   // end of the uniform part of the s grid
  double growth = 0.03;  // relative spacing beyond s_near
  double s_far = 400.0;  // end of the tabulated range; a c/s^2 tail model follows
};

class GammaProfile {
 public:
  GammaProfile(const CoulombTable& table, const ChargeConfig& c, const Vec3& n, const GammaOrders& o = {});

  // Components along e1 (in the plane of n and the cap axis, pointing towards the axis) and e2 = n x e1.
  const Vec3& e1() const { return e1_; }
  const Vec3& e2() const { return e2_; }
  // Gamma_n(s) by quadrature over the interpolated table.
  std::array<double, 2> value(double s) const;
  // Large-s limit and the coefficient of the s^-2 correction, fitted at s_far / 2 and s_far.
  std::array<double, 2> limit() const { return limit_; }
  // \int_0^inf ds e^{iks} Gamma_n(s) per component; err from a half-resolution spline.
  std::array<cplx, 2> transform(double k, double* err = nullptr) const;
  const std::vector<double>& nodes() const { return s_; }

 private:
  double g_hat(int comp, double zeta, double mu) const;

  const ChargeConfig c_;
  Vec3 n_, e1_, e2_;
  GammaOrders o_;
  double r0_;
  std::array<UniformBicubic, 2> g_;
  std::vector<double> tau_x_, tau_w_;
  std::vector<double> s_;
  std::array<CubicHermite, 2> spline_, coarse_;
  std::array<double, 2> limit_{}, tail_c_{}, tail_dev_{};
};

// Point-charge limit of Gamma_n at large s: q M \int dmu / (1 - mu) \int dphi P_n[A(x^) x^],
// with M the mass of theta1 and q the integral of theta0. Components on the frame of GammaProfile.
std::array<double, 2> gamma_limit(const ChargeConfig& c, const Vec3& n, int mu_order = 256, int phi = 256);

// Small-s behaviour Gamma_n(s) = c2 s^2 + O(s^3) along e1:
//   c2 = -2 pi A'(theta_n) (M \int theta0 / tau^2 + (2 m2 / 3) \int theta0 / tau^4),
// with m2 the second moment of theta1.
double gamma_small_s_coefficient(const ChargeConfig& c, const Vec3& n);

// m~perp_inf with the coulomb table and one Gamma profile per direction, both cached.
class MInfinity {
 public:
  explicit MInfinity(const ChargeConfig& c, const GammaOrders& o = {});
  Amplitude amplitude(const LightlikeMomentum& p) const;
  const GammaProfile& profile(const Vec3& n) const;
  const CoulombTable& table() const { return table_; }
  const ChargeConfig& config() const { return c_; }

 private:
  ChargeConfig c_;
  GammaOrders o_;
  CoulombTable table_;
  mutable std::mutex mu_;
  mutable std::map<std::array<double, 3>, std::unique_ptr<GammaProfile>> cache_;
};

// Transverse spatial amplitude of m_infinity. Engines are cached per configuration.
Amplitude amp_m_infinity(const ChargeConfig& c, const LightlikeMomentum& p, const QuadratureConfig& q);
const MInfinity& m_infinity_engine(const ChargeConfig& c);

}  // namespace conelight
