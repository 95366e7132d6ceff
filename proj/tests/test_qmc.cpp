#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "conelight/qmc.hpp"
#include "conelight/quadrature.hpp"

using namespace conelight;

TEST_CASE("scrambled points stratify like a net") {
  SobolStream s(2, 42);
  std::set<int> cells;
  double u[2];
  for (int i = 0; i < 1024; ++i) {
    s.next(u);
    CHECK(u[0] > 0.0);
    CHECK(u[1] < 1.0);
    cells.insert(static_cast<int>(u[0] * 32) * 32 + static_cast<int>(u[1] * 32));
  }
  CHECK(cells.size() == 1024);
}

TEST_CASE("seek agrees with sequential generation") {
  SobolStream a(7, 9), b(7, 9);
  double ua[7], ub[7];
  for (int i = 0; i < 300; ++i) a.next(ua);
  b.seek(299);
  b.next(ub);
  for (int d = 0; d < 7; ++d) CHECK(ua[d] == ub[d]);
  b.seek(0);
  a.seek(0);
  a.next(ua);
  b.next(ub);
  CHECK(ua[3] == ub[3]);
}

TEST_CASE("different seeds give different points") {
  SobolStream a(3, 1), b(3, 2);
  double ua[3], ub[3];
  a.next(ua);
  b.next(ub);
  CHECK(ua[0] != ub[0]);
}

TEST_CASE("constant and oscillatory integrals") {
  QmcOptions opt;
  opt.samples = 4096;
  const QmcResult one = qmc_integrate(3, 1, [](const double*, double* o) { o[0] = 1.0; }, opt);
  CHECK(one.value[0] == 1.0);
  CHECK(one.err[0] == 0.0);
  opt.samples = 1 << 15;
  opt.replicates = 16;
  const QmcResult s = qmc_integrate(1, 1, [](const double* u, double* o) { o[0] = std::sin(50.0 * u[0]); }, opt);
  const double exact = (1.0 - std::cos(50.0)) / 50.0;
  CHECK(std::fabs(s.value[0] - exact) <= s.err[0] + 1e-12);
  CHECK(s.err[0] < 1e-4);
}

TEST_CASE("parallel and serial sums are bit-identical") {
  QmcOptions opt;
  opt.samples = 5000;
  opt.replicates = 4;
  auto f = [](const double* u, double* o) {
    o[0] = std::exp(u[0] + u[1] * u[2]);
    o[1] = std::cos(7.0 * u[3]) * u[4];
  };
  const QmcResult a = qmc_integrate(5, 2, f, opt), b = qmc_integrate_serial(5, 2, f, opt);
  for (int k = 0; k < 2; ++k) {
    CHECK(a.value[k] == b.value[k]);
    CHECK(a.err[k] == b.err[k]);
  }
}

TEST_CASE("charge sampler reproduces the smeared moments") {
  const ChargeConfig c = default_config();
  const ChargeSampler smp(c);
  QmcOptions opt;
  opt.samples = 1 << 15;
  const Vec3 d = c.sigma.axis();
  const QmcResult r = qmc_integrate(
      ChargeSampler::kDim, 4,
      [&](const double* u, double* o) {
        const ChargeSample s = smp.map(u);
        o[0] = s.weight;
        o[1] = s.weight * s.tau;
        o[2] = s.weight * dot(s.y, d);
        o[3] = s.weight * dot(s.x1, s.x1);
      },
      opt);
  // Oracles by one-dimensional Gauss quadrature of the factorized profiles.
  const double q = total_charge(c);
  const double mt = integrate_composite([&](double t) { return t * c.theta0.eval(t); }, 1.0, 2.0, 64, 16);
  const double m_rad = integrate_composite([&](double r) { return r * r * r * c.sigma.eval_radial(r); }, 5.0, 8.0, 64, 16);
  const double m_cap = 2.0 * M_PI *
                       integrate_composite(
                           [&](double th) { return std::sin(th) * std::cos(th) * c.sigma.eval_angular_polar(th); },
                           0.0, c.sigma.aperture(), 64, 16);
  const double m_x2 =
      4.0 * M_PI * integrate_composite([&](double r) { return r * r * r * r * c.theta1.eval_radial(r); }, 0.0, 0.5, 64, 16);
  CHECK(std::fabs(r.value[0] - q) <= r.err[0] + 1e-6);
  CHECK(std::fabs(r.value[1] - mt) <= r.err[1] + 1e-6);
  CHECK(std::fabs(r.value[2] - q * m_rad * m_cap) <= r.err[2] + 1e-5);
  CHECK(std::fabs(r.value[3] - q * m_x2) <= r.err[3] + 1e-6);
  CHECK(r.err[0] < 1e-3);
}

TEST_CASE("odd time window has zero total weight") {
  ChargeConfig c = default_config();
  c.theta0 = RadialWindow(1.0, 2.0, 1.0, true);
  const ChargeSampler smp(c);
  QmcOptions opt;
  opt.samples = 1 << 14;
  const QmcResult r = qmc_integrate(ChargeSampler::kDim, 1, [&](const double* u, double* o) { o[0] = smp.map(u).weight; }, opt);
  CHECK(std::fabs(r.value[0]) <= r.err[0] + 1e-6);
}

TEST_CASE("thread cap from the environment") {
  setenv("CONELIGHT_THREADS", "1", 1);
  CHECK(thread_count() == 1);
  unsetenv("CONELIGHT_THREADS");
  CHECK(thread_count() >= 1);
}
