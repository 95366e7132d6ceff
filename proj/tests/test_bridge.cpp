#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "conelight/bridge.hpp"

using namespace conelight;

namespace {

Vec3 unit_at(double polar, double az) {
  return {std::cos(polar), std::sin(polar) * std::cos(az), std::sin(polar) * std::sin(az)};
}

// Field of a rotation invariant ball: enclosed mass over 4 pi R^2, radially outward.
double gauss_law(const Bump3& b, double R) {
  const double top = std::min(R, b.radius());
  const double m = integrate_composite([&](double r) { return 4.0 * M_PI * r * r * b.eval_radial(r); }, 0.0, top,
                                       16, 16);
  return m / (4.0 * M_PI * R * R);
}

}  // namespace

TEST_CASE("ray representation obeys Gauss's law for isotropic sigma") {
  const ChargeConfig c = make_config(1, 2, 0.5, 5, 8, 1, 1, {1, 0, 0}, M_PI);
  for (double R : {0.1, 0.25, 0.4, 0.6, 3.0}) {
    for (double chi : {0.0, 1.0, 2.5}) {
      const FieldComponents f = coulomb_ray(c, R, chi);
      const double g = gauss_law(c.theta1, R);
      CHECK(std::abs(f.radial - g) <= 2e-6 * g);
      CHECK(std::abs(f.polar) <= 1e-12);
    }
  }
}

TEST_CASE("ray representation matches direct quadrature outside the ball") {
  const ChargeConfig c = default_config();
  for (const Vec3& x : {Vec3{3.0, 0.5, 0.0}, Vec3{-1.0, 2.0, 1.0}, Vec3{0.4, 0.0, -0.8}}) {
    const Vec3 ray = coulomb_ray(c, x), direct = coulomb_direct(c, x, 48, 160);
    CHECK(norm(ray - direct) <= 1e-5 * norm(direct));
  }
}

TEST_CASE("coulomb table interpolates the ray field") {
  const ChargeConfig c = default_config();
  const CoulombTable t(c);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double scale = c.theta1.total() * c.sigma.eval_angular_polar(0.0);
  double worst = 0.0;
  for (int i = 0; i < 40; ++i) {
    const double R = 0.05 * std::pow(400.0, u(rng)), chi = M_PI * u(rng);
    const FieldComponents ray = coulomb_ray(c, R, chi), tab = t.scaled(t.zeta_of(R), chi);
    worst = std::max({worst, std::abs(R * R * ray.radial - tab.radial), std::abs(R * R * ray.polar - tab.polar)});
  }
  CHECK(worst <= 5e-6 * scale);
  // Far field: R^2 E tends to the cap profile times the mass.
  const FieldComponents far = t.scaled(1.0, M_PI / 8.0);
  CHECK(std::abs(far.radial - c.theta1.total() * c.sigma.eval_angular_polar(M_PI / 8.0)) <= 1e-15);
}

TEST_CASE("Gamma profile: large-s limit and small-s coefficient") {
  const ChargeConfig c = default_config();
  const MInfinity& m = m_infinity_engine(c);
  for (double polar : {0.6, 1.3}) {
    const Vec3 n = unit_at(polar, 0.4);
    const GammaProfile& g = m.profile(n);
    const auto lim = gamma_limit(c, n);
    CHECK(std::abs(g.limit()[0] - lim[0]) <= 1e-4 * std::abs(lim[0]));
    CHECK(std::abs(g.limit()[1] - lim[1]) <= 1e-4 * std::abs(lim[0]));
    // The frame puts the whole field in the plane of n and the axis.
    CHECK(std::abs(g.value(3.0)[1]) <= 1e-10 * std::abs(g.value(3.0)[0]));
  }
  const Vec3 n = unit_at(0.6, 0.0);
  const double c2 = gamma_small_s_coefficient(c, n);
  const double s = 0.004;
  CHECK(std::abs(m.profile(n).value(s)[0] / (s * s) - c2) <= 2e-3 * std::abs(c2));
}

TEST_CASE("m_infinity is transverse and deterministic") {
  const ChargeConfig c = default_config();
  const QuadratureConfig q;
  const LightlikeMomentum p(2.0, unit_at(0.9, 1.1));
  const Amplitude a = amp_m_infinity(c, p, q), b = amp_m_infinity(c, p, q);
  cplx dn = 0.0;
  for (int k = 0; k < 3; ++k) dn += p.dir[k] * a.c[k + 1];
  CHECK(std::abs(dn) <= 1e-12 * a.spatial_norm());
  CHECK(a.c[0] == cplx(0.0));
  for (int k = 0; k < 4; ++k) CHECK(a.c[k] == b.c[k]);
  CHECK(a.err == b.err);
}

TEST_CASE("m_infinity falls at least like 1/lambda between 10 and 100") {
  const ChargeConfig c = default_config();
  const QuadratureConfig q;
  for (const Vec3& n : {unit_at(0.6, 0.0), unit_at(M_PI / 2, 0.0), unit_at(2.5, 1.0)}) {
    const Amplitude a10 = amp_m_infinity(c, LightlikeMomentum(10.0, n), q);
    const Amplitude a100 = amp_m_infinity(c, LightlikeMomentum(100.0, n), q);
    CHECK(a100.spatial_norm() - a100.err <= 0.1 * (a10.spatial_norm() + a10.err));
  }
}

TEST_CASE("direction average of m_infinity stays finite in the infrared") {
  const ChargeConfig c = default_config();
  const QuadratureConfig q;
  double avg[2] = {0.0, 0.0};
  const double mags[2] = {0.1, 0.05};
  for (int i = 0; i < 8; ++i) {
    const Vec3 n = unit_at(std::acos(1.0 - (2.0 * i + 1.0) / 8.0), 2.39996 * i);
    for (int j = 0; j < 2; ++j) avg[j] += amp_m_infinity(c, LightlikeMomentum(mags[j], n), q).spatial_norm() / 8.0;
  }
  CHECK(std::isfinite(avg[0]));
  CHECK(avg[0] > 0.0);
  // No growth beyond 1/lambda (with 10% slack) when the momentum halves.
  CHECK(avg[1] <= std::pow(2.0, 1.1) * avg[0]);
}

TEST_CASE("m_infinity reproduces the transverse m_s at s = 64") {
  const ChargeConfig c = default_config();
  QuadratureConfig q;
  q.qmc_samples = 1 << 12;
  const LightlikeMomentum p(5.0, {0.0, 0.0, 1.0});
  const Amplitude inf = amp_m_infinity(c, p, q);
  const Amplitude ms = transverse_project(amp_m_s(c, 64.0, p, q), p.dir);
  CHECK((inf - ms).spatial_norm() <= inf.err + ms.err);
  CHECK(inf.spatial_norm() > 10.0 * (inf.err + ms.err));
}
