#pragma once

#include <functional>
#include <vector>

#include "conelight/spacetime.hpp"

namespace conelight {

// Canonical mollifier exp(-1/(1-t^2)) on |t| < 1, zero elsewhere.
double mollifier(double t);

// Time-shell window theta0 on [lo, hi]; `odd` selects the antisymmetric variant with zero integral.
class RadialWindow {
 public:
  RadialWindow() : RadialWindow(1.0, 2.0, 1.0) {}
  RadialWindow(double lo, double hi, double total, bool odd = false);
  double eval(double tau) const;
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double total() const { return total_; }
  bool odd() const { return odd_; }

 private:
  double lo_, hi_, total_;
  bool odd_;
  double scale_;
};

// Rotation invariant bump theta1 supported in the closed ball of radius r.
class Bump3 {
 public:
  Bump3() : Bump3(0.5, 1.0) {}
  Bump3(double radius, double total);
  double eval(const Vec3& x) const { return eval_radial(norm(x)); }
  double eval_radial(double rho) const;
  double radius() const { return radius_; }
  double total() const { return total_; }

 private:
  double radius_, total_, scale_;
};

// Annulus profile sigma(y) = radial(|y|) * cap(angle between y and axis).
// aperture >= pi gives the rotation invariant profile.
class ShellBump3 {
 public:
  ShellBump3() : ShellBump3(5.0, 8.0) {}
  ShellBump3(double r_in, double r_out, Vec3 axis = {1.0, 0.0, 0.0}, double aperture = M_PI / 3.0);
  double eval(const Vec3& y) const;
  double eval_radial(double rho) const;                  // normalized so that \int rho^2 radial = 1
  double eval_angular(const Vec3& unit_dir) const;       // normalized so that \int de angular = 1
  double eval_angular_polar(double theta) const;         // same, as a function of the polar angle
  double r_in() const { return r_in_; }
  double r_out() const { return r_out_; }
  const Vec3& axis() const { return axis_; }
  double aperture() const { return aperture_; }
  bool isotropic() const { return aperture_ >= M_PI; }

 private:
  double r_in_, r_out_;
  Vec3 axis_;
  double aperture_;
  double radial_scale_, angular_scale_;
};

struct ChargeConfig {
  RadialWindow theta0;
  Bump3 theta1;
  ShellBump3 sigma;
  double s = 1.0;
  double q = 1.0;
};

// tau1=1, tau2=2, r=0.5, R=5, Rbar=8, q=1, s=1, cap about e_x with half-aperture pi/3.
ChargeConfig default_config();
ChargeConfig make_config(double tau1, double tau2, double r, double R, double Rbar, double q, double s = 1.0,
                         Vec3 axis = {1.0, 0.0, 0.0}, double aperture = M_PI / 3.0);

double eval_theta0(const RadialWindow& w, double tau);
double eval_theta1(const Bump3& b, const Vec3& x);
double eval_sigma(const ShellBump3& s, const Vec3& x);
// Scaled sigma of a configuration: s^-3 sigma(x/s).
double eval_sigma_scaled(const ChargeConfig& c, const Vec3& x);

ChargeConfig scale_sigma(const ChargeConfig& c, double s);
bool separation_ok(const ChargeConfig& c);
double separation_threshold(double tau1, double tau2, double r);
double total_charge(const ChargeConfig& c);

// (theta1 * sigma_s)(x) by product Gauss quadrature over the ball.
double convolution_theta1_sigma(const ChargeConfig& c, const Vec3& x, int order = 24);
// \int d^4x of the smeared divergence rho_0 - rho_s.
double divergence_integral(const ChargeConfig& c, int ball_order = 20, int grid_order = 16);

// Inverse-CDF sampler for a signed density on [a, b], built from a fine cell table of |f|.
// sample() maps u in [0,1) to x and reports the importance ratio f(x) / pdf(x).
class InverseCdf {
 public:
  InverseCdf() = default;
  InverseCdf(std::function<double(double)> f, double a, double b, int cells = 4096);
  double sample(double u, double* ratio) const;
  double abs_mass() const { return mass_; }

 private:
  std::function<double(double)> f_;
  double a_ = 0.0, b_ = 1.0;
  int cells_ = 0;
  double mass_ = 0.0;
  std::vector<double> cdf_;
  std::vector<double> node_;
};

}  // namespace conelight
