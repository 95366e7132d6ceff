#include "conelight/coulomb.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>

#include "conelight/qmc.hpp"

namespace conelight {

namespace {

// Cap profile A as a cubic Hermite table in c = cos(angle to the axis). A is even in the
// angle, hence smooth in c, and the table replaces an acos and an exp per evaluation.
class CapTable {
 public:
  CapTable(const ShellBump3& s, int n = 4097) : iso_(s.isotropic()), n_(n) {
    if (iso_) {
      iso_value_ = s.eval_angular_polar(0.0);
      return;
    }
    h_ = 2.0 / (n - 1);
    f_.resize(n);
    d_.resize(n);
    const double a = s.aperture();
    for (int i = 0; i < n; ++i) {
      const double c = std::clamp(-1.0 + i * h_, -1.0, 1.0);
      const double th = std::acos(c), t = th / a;
      f_[i] = s.eval_angular_polar(th);
      if (t >= 1.0) {
        d_[i] = 0.0;
      } else if (i == n - 1) {
        // dA/dc at theta = 0 equals -A''(0); the mollifier has phi''(0) = -2/e.
        d_[i] = -s.eval_angular_polar(0.0) * (-2.0) / (a * a);
      } else {
        const double dphi = -2.0 * t / ((1.0 - t * t) * (1.0 - t * t));  // phi'/phi
        d_[i] = -f_[i] * dphi / (a * std::sin(th));
      }
    }
  }

  double operator()(double c) const {
    if (iso_) return iso_value_;
    double u = (c + 1.0) / h_;
    const int i = std::clamp(static_cast<int>(u), 0, n_ - 2);
    u -= i;
    const double h0 = (2.0 * u - 3.0) * u * u + 1.0, h1 = (3.0 - 2.0 * u) * u * u;
    const double k0 = ((u - 2.0) * u + 1.0) * u, k1 = (u - 1.0) * u * u;
    return f_[i] * h0 + f_[i + 1] * h1 + h_ * (d_[i] * k0 + d_[i + 1] * k1);
  }

 private:
  bool iso_;
  int n_;
  double iso_value_ = 0.0, h_ = 0.0;
  std::vector<double> f_, d_;
};

// Everything about the charge that does not depend on the evaluation point.
struct RayKernel {
  const Bump3& ball;
  CapTable cap;
  RayOrders o;
  std::vector<double> bx, bw, lam;  // impact parameters, weights, full chord integrals
  std::vector<double> cpsi, wpsi;   // cos(psi) nodes and trapezoid weights on the full circle

  RayKernel(const ChargeConfig& c, const RayOrders& orders) : ball(c.theta1), cap(c.sigma), o(orders) {
    const double r = ball.radius();
    composite_nodes(0.0, r, o.chord_panels, 16, bx, bw);
    lam.resize(bx.size());
    for (size_t i = 0; i < bx.size(); ++i) lam[i] = chord(bx[i], -std::sqrt(r * r - bx[i] * bx[i]));
    for (int m = 0; m <= o.psi; ++m) {
      cpsi.push_back(std::cos(M_PI * m / o.psi));
      wpsi.push_back((m == 0 || m == o.psi ? 1.0 : 2.0) * M_PI / o.psi);
    }
  }

  // \int_{lo}^{h} theta1(sqrt(b^2 + t^2)) dt with h the far end of the chord at impact parameter b.
  double chord(double b, double lo) const {
    const double r = ball.radius();
    const double h = std::sqrt(std::max(0.0, r * r - b * b));
    if (lo >= h) return 0.0;
    return integrate_composite([&](double t) { return ball.eval_radial(std::sqrt(b * b + t * t)); }, lo, h, 2,
                               o.line / 2);
  }

  // Adds weight * \int dpsi A(e) (cos a, sin a cos psi) for the ray cone of half-angle a.
  void cone(double ca, double sa, double cchi, double schi, double weight, FieldComponents& out) const {
    double er = 0.0, ep = 0.0;
    for (size_t m = 0; m < cpsi.size(); ++m) {
      const double a = wpsi[m] * cap(ca * cchi - sa * schi * cpsi[m]);
      er += a;
      ep += a * cpsi[m];
    }
    out.radial += weight * ca * er;
    out.polar += weight * sa * ep;
  }

  FieldComponents field(double R, double chi) const {
    FieldComponents out;
    const double r = ball.radius();
    const double cchi = std::cos(chi), schi = std::sin(chi);
    if (R > r) {
      // Rays from outside cross the whole chord; parametrize the cone by the impact parameter b.
      for (size_t i = 0; i < bx.size(); ++i) {
        const double b = bx[i], sa = b / R, ca = std::sqrt(1.0 - sa * sa);
        cone(ca, sa, cchi, schi, bw[i] * lam[i] * b / (R * std::sqrt(R * R - b * b)), out);
      }
      return out;
    }
    std::vector<double> ax, aw;
    composite_nodes(0.0, M_PI, 2, o.polar / 2, ax, aw);
    for (size_t i = 0; i < ax.size(); ++i) {
      const double ca = std::cos(ax[i]), sa = std::sin(ax[i]);
      const double L = chord(R * sa, -R * ca);
      if (L != 0.0) cone(ca, sa, cchi, schi, aw[i] * sa * L, out);
    }
    return out;
  }
};

}  // namespace

FieldComponents coulomb_ray(const ChargeConfig& c, double R, double chi, const RayOrders& o) {
  if (!(R >= 0.0)) throw DomainError("coulomb_ray: negative radius");
  return RayKernel(c, o).field(R, chi);
}

namespace {

Vec3 assemble(const Vec3& x, const Vec3& d, double er, double ep) {
  const double R = norm(x);
  if (R == 0.0) return {0.0, 0.0, 0.0};
  const Vec3 xh = (1.0 / R) * x;
  const double cchi = std::clamp(dot(xh, d), -1.0, 1.0), schi = std::sqrt(1.0 - cchi * cchi);
  Vec3 e = er * xh;
  if (schi > 1e-14) e = e + (ep / schi) * (cchi * xh - d);
  return e;
}

}  // namespace

Vec3 coulomb_ray(const ChargeConfig& c, const Vec3& x, const RayOrders& o) {
  const Vec3& d = c.sigma.axis();
  const double R = norm(x);
  if (R == 0.0) {
    // At the centre the field is the cap mean direction times the half chord integral.
    const FieldComponents f = coulomb_ray(c, 1e-12, 0.0, o);
    return f.radial * d;
  }
  const double chi = std::acos(std::clamp(dot(x, d) / R, -1.0, 1.0));
  const FieldComponents f = coulomb_ray(c, R, chi, o);
  return assemble(x, d, f.radial, f.polar);
}

CoulombTable::CoulombTable(const ChargeConfig& c, int n_zeta, int n_chi, const RayOrders& o)
    : r0_(4.0 * c.theta1.radius()), axis_(c.sigma.axis()) {
  const RayKernel kernel(c, o);
  std::vector<double> er(static_cast<size_t>(n_zeta) * n_chi, 0.0), ep(er.size(), 0.0);
  const double mass = c.theta1.total();
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_count())
  for (int i = 1; i < n_zeta; ++i) {
    const double zeta = static_cast<double>(i) / (n_zeta - 1);
    for (int j = 0; j < n_chi; ++j) {
      const double chi = M_PI * j / (n_chi - 1);
      const size_t k = static_cast<size_t>(i) * n_chi + j;
      if (i == n_zeta - 1) {
        er[k] = mass * c.sigma.eval_angular_polar(chi);
        continue;
      }
      const double R = radius_of(zeta);
      const FieldComponents f = kernel.field(R, chi);
      er[k] = R * R * f.radial;
      ep[k] = R * R * f.polar;
    }
  }
  radial_ = UniformBicubic(0.0, 1.0, n_zeta, 0.0, M_PI, n_chi, std::move(er));
  polar_ = UniformBicubic(0.0, 1.0, n_zeta, 0.0, M_PI, n_chi, std::move(ep));
}

FieldComponents CoulombTable::scaled(double zeta, double chi) const {
  return {radial_.eval(zeta, chi), polar_.eval(zeta, chi)};
}

Vec3 CoulombTable::eval(const Vec3& x) const {
  const double R = norm(x);
  if (R == 0.0) return {0.0, 0.0, 0.0};
  const double chi = std::acos(std::clamp(dot(x, axis_) / R, -1.0, 1.0));
  const FieldComponents f = scaled(zeta_of(R), chi);
  return assemble(x, axis_, f.radial / (R * R), f.polar / (R * R));
}

}  // namespace conelight
