#include "conelight/profiles.hpp"

#include <algorithm>
#include <cmath>

#include "conelight/quadrature.hpp"

namespace conelight {

double mollifier(double t) {
  const double d = 1.0 - t * t;
  if (d <= 0.0) return 0.0;
  return std::exp(-1.0 / d);
}

namespace {

// Mollifier integrals are entire-function-smooth inside the support, so a
// composite Gauss rule converges to round-off well before 64 panels.
template <class F>
double smooth_integral(F&& f, double a, double b) {
  return integrate_composite(f, a, b, 64, 16);
}

}  // namespace

RadialWindow::RadialWindow(double lo, double hi, double total, bool odd)
    : lo_(lo), hi_(hi), total_(odd ? 0.0 : total), odd_(odd) {
  if (!(lo > 0.0) || !(hi > lo)) throw DomainError("RadialWindow: need 0 < lo < hi");
  const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
  const double base = smooth_integral([&](double t) { return mollifier((t - c) / h); }, lo, hi);
  scale_ = odd ? 1.0 / base : total / base;
}

double RadialWindow::eval(double tau) const {
  if (tau <= lo_ || tau >= hi_) return 0.0;
  const double c = 0.5 * (lo_ + hi_), h = 0.5 * (hi_ - lo_);
  const double t = (tau - c) / h;
  return scale_ * mollifier(t) * (odd_ ? t : 1.0);
}

Bump3::Bump3(double radius, double total) : radius_(radius), total_(total) {
  if (!(radius > 0.0)) throw DomainError("Bump3: radius must be positive");
  const double m = smooth_integral([&](double rho) { return rho * rho * mollifier(rho / radius); }, 0.0, radius);
  scale_ = total / (4.0 * M_PI * m);
}

double Bump3::eval_radial(double rho) const {
  if (rho >= radius_) return 0.0;
  return scale_ * mollifier(rho / radius_);
}

ShellBump3::ShellBump3(double r_in, double r_out, Vec3 axis, double aperture)
    : r_in_(r_in), r_out_(r_out), axis_(normalized(axis)), aperture_(aperture) {
  if (!(r_in > 0.0) || !(r_out > r_in)) throw DomainError("ShellBump3: need 0 < R < Rbar");
  if (!(aperture > 0.0)) throw DomainError("ShellBump3: aperture must be positive");
  const double c = 0.5 * (r_in + r_out), h = 0.5 * (r_out - r_in);
  radial_scale_ =
      1.0 / smooth_integral([&](double rho) { return rho * rho * mollifier((rho - c) / h); }, r_in, r_out);
  if (isotropic()) {
    angular_scale_ = 1.0 / (4.0 * M_PI);
  } else {
    const double a = aperture_;
    angular_scale_ =
        1.0 / (2.0 * M_PI * smooth_integral([&](double th) { return std::sin(th) * mollifier(th / a); }, 0.0, a));
  }
}

double ShellBump3::eval_radial(double rho) const {
  if (rho <= r_in_ || rho >= r_out_) return 0.0;
  const double c = 0.5 * (r_in_ + r_out_), h = 0.5 * (r_out_ - r_in_);
  return radial_scale_ * mollifier((rho - c) / h);
}

double ShellBump3::eval_angular_polar(double theta) const {
  if (isotropic()) return angular_scale_;
  return angular_scale_ * mollifier(theta / aperture_);
}

double ShellBump3::eval_angular(const Vec3& e) const {
  if (isotropic()) return angular_scale_;
  const double c = std::clamp(dot(e, axis_), -1.0, 1.0);
  return eval_angular_polar(std::acos(c));
}

double ShellBump3::eval(const Vec3& y) const {
  const double rho = norm(y);
  const double rad = eval_radial(rho);
  if (rad == 0.0) return 0.0;
  return rad * eval_angular((1.0 / rho) * y);
}

ChargeConfig make_config(double tau1, double tau2, double r, double R, double Rbar, double q, double s, Vec3 axis,
                         double aperture) {
  ChargeConfig c;
  c.theta0 = RadialWindow(tau1, tau2, q);
  c.theta1 = Bump3(r, 1.0);
  c.sigma = ShellBump3(R, Rbar, axis, aperture);
  c.q = q;
  c.s = s;
  if (s < 1.0) throw DomainError("scale s must be >= 1");
  return c;
}

ChargeConfig default_config() { return make_config(1.0, 2.0, 0.5, 5.0, 8.0, 1.0); }

double eval_theta0(const RadialWindow& w, double tau) { return w.eval(tau); }
double eval_theta1(const Bump3& b, const Vec3& x) { return b.eval(x); }
double eval_sigma(const ShellBump3& s, const Vec3& x) { return s.eval(x); }

double eval_sigma_scaled(const ChargeConfig& c, const Vec3& x) {
  const double s = c.s;
  return c.sigma.eval((1.0 / s) * x) / (s * s * s);
}

ChargeConfig scale_sigma(const ChargeConfig& c, double s) {
  if (!(s >= 1.0)) throw DomainError("scale_sigma: s must be >= 1");
  ChargeConfig out = c;
  out.s = s;
  return out;
}

double separation_threshold(double tau1, double tau2, double r) {
  return (tau2 * tau2 - tau1 * tau1) / (2.0 * tau1) + (1.0 + tau2 * tau2 / (tau1 * tau1)) * r;
}

bool separation_ok(const ChargeConfig& c) {
  return c.sigma.r_in() > separation_threshold(c.theta0.lo(), c.theta0.hi(), c.theta1.radius());
}

double total_charge(const ChargeConfig& c) {
  const RadialWindow& w = c.theta0;
  return smooth_integral([&](double t) { return w.eval(t); }, w.lo(), w.hi());
}

double convolution_theta1_sigma(const ChargeConfig& c, const Vec3& x, int order) {
  const double r = c.theta1.radius();
  const GaussRule& g = gauss_legendre(order);
  double sum = 0.0;
  for (int i = 0; i < order; ++i) {
    const double rho = 0.5 * r * (1.0 + g.x[i]);
    const double wr = 0.5 * r * g.w[i] * rho * rho * c.theta1.eval_radial(rho);
    if (wr == 0.0) continue;
    for (int j = 0; j < order; ++j) {
      const double ct = g.x[j], st = std::sqrt(1.0 - ct * ct);
      for (int k = 0; k < 2 * order; ++k) {
        const double ph = M_PI * (k + 0.5) / order;
        const Vec3 z{rho * st * std::cos(ph), rho * st * std::sin(ph), rho * ct};
        sum += wr * g.w[j] * (M_PI / order) * eval_sigma_scaled(c, x - z);
      }
    }
  }
  return sum;
}

double divergence_integral(const ChargeConfig& c, int ball_order, int grid_order) {
  // In shell coordinates d^4x rho = dtau d^3x theta0 * (spatial profile), so
  // both terms reduce to theta0 times a spatial integral.
  const double r = c.theta1.radius();
  const double q = total_charge(c);
  const double initial =
      4.0 * M_PI * integrate_composite([&](double rho) { return rho * rho * c.theta1.eval_radial(rho); }, 0.0, r, 8, 16);
  // The convolution is axially symmetric about the sigma axis.
  Vec3 e1, e2;
  orthonormal_frame(c.sigma.axis(), e1, e2);
  const double lo = c.s * c.sigma.r_in() - r, hi = c.s * c.sigma.r_out() + r;
  // Polar range about the axis: the cap widened by the angular blur of the ball.
  double chi_max = M_PI;
  if (!c.sigma.isotropic()) chi_max = std::min(M_PI, c.sigma.aperture() + std::asin(std::min(1.0, r / lo)));
  std::vector<double> xs, ws, cs, cw;
  composite_nodes(lo, hi, 4, grid_order, xs, ws);
  composite_nodes(0.0, chi_max, 4, grid_order, cs, cw);
  double final_charge = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    for (size_t j = 0; j < cs.size(); ++j) {
      const double ct = std::cos(cs[j]), st = std::sin(cs[j]);
      const Vec3 x = xs[i] * (ct * c.sigma.axis() + st * e1);
      final_charge += 2.0 * M_PI * ws[i] * cw[j] * st * xs[i] * xs[i] * convolution_theta1_sigma(c, x, ball_order);
    }
  }
  return q * (initial - final_charge);
}

InverseCdf::InverseCdf(std::function<double(double)> f, double a, double b, int cells)
    : f_(std::move(f)), a_(a), b_(b), cells_(cells) {
  // Piecewise linear density through |f| at the nodes keeps the importance
  // ratio continuous, which matters for quasi-random convergence.
  node_.resize(cells + 1);
  cdf_.assign(cells + 1, 0.0);
  const double dx = (b - a) / cells;
  for (int i = 0; i <= cells; ++i) node_[i] = std::fabs(f_(a + i * dx));
  for (int i = 0; i < cells; ++i) cdf_[i + 1] = cdf_[i] + 0.5 * dx * (node_[i] + node_[i + 1]);
  mass_ = cdf_.back();
  if (!(mass_ > 0.0)) throw DomainError("InverseCdf: density has zero mass");
}

double InverseCdf::sample(double u, double* ratio) const {
  const double target = u * mass_;
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), target);
  int i = static_cast<int>(it - cdf_.begin()) - 1;
  i = std::clamp(i, 0, cells_ - 1);
  while (cdf_[i + 1] - cdf_[i] <= 0.0 && i > 0) --i;
  const double dx = (b_ - a_) / cells_;
  const double g0 = node_[i], g1 = node_[i + 1];
  // Solve dx (g0 t + (g1 - g0) t^2 / 2) = rem for t in [0, 1].
  const double rem = std::clamp(target - cdf_[i], 0.0, cdf_[i + 1] - cdf_[i]);
  const double A = 0.5 * (g1 - g0) * dx, B = g0 * dx;
  double t;
  if (std::fabs(A) < 1e-14 * (std::fabs(B) + 1e-300)) {
    t = rem / B;
  } else {
    const double disc = std::sqrt(std::max(0.0, B * B + 4.0 * A * rem));
    t = 2.0 * rem / (B + disc);
  }
  t = std::clamp(t, 0.0, 1.0);
  const double x = a_ + (i + t) * dx;
  const double pdf = (g0 + (g1 - g0) * t) / mass_;
  if (ratio) *ratio = pdf > 0.0 ? f_(x) / pdf : 0.0;
  return x;
}

}  // namespace conelight
