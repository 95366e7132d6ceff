#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "conelight/quadrature.hpp"
#include "conelight/worldline.hpp"

using namespace conelight;

namespace {

double dist4(const FourVector& a, const FourVector& b) {
  const FourVector d = a - b;
  return std::sqrt(d.t * d.t + dot(d.x, d.x));
}

// Random parameters drawn from the default supports: tau in [1,2], |x1| <= 0.5, 5 <= |y| <= 8.
ShellPathParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::normal_distribution<double> n01;
  auto dir = [&] { return normalized(Vec3{n01(rng), n01(rng), n01(rng)}); };
  ShellPathParams p;
  p.tau = 1.0 + u01(rng);
  p.x1 = (0.5 * std::cbrt(u01(rng))) * dir();
  p.y = (5.0 + 3.0 * u01(rng)) * dir();
  return p;
}

FourVector asym(const AsymptoticData& d, double u) { return u * d.l + d.r + (1.0 / u) * d.a; }

}  // namespace

TEST_CASE("shell path endpoints and values") {
  const ShellPathParams p{1.3, {0.2, -0.1, 0.3}, {5.0, 1.0, 0.0}};
  const FourVector z0 = shell_path(p, 0.0), ref = xi({p.tau, p.x1});
  CHECK(dist4(z0, ref) == 0.0);
  const ShellPathParams q{1.0, {0, 0, 0}, {1, 0, 0}};
  const FourVector z1 = shell_path(q, 1.0);
  CHECK(z1.t == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(z1.x[0] == 1.0);
  const FourVector v = shell_velocity(p, 1e4);
  const AsymptoticData d = asymptotic_data(p);
  CHECK(dist4(v, d.l) <= 1e-7 * norm(p.y));
}

TEST_CASE("analytic velocity and acceleration match finite differences") {
  const ShellPathParams p{1.7, {0.3, 0.1, -0.2}, {-4.0, 5.0, 2.0}};
  for (double u : {0.0, 0.3, 1.0, 4.0}) {
    const double h = 1e-5;
    const PathPoint a = shell_point(p, u);
    const FourVector fd = (1.0 / (2 * h)) * (shell_path(p, u + h) - shell_path(p, u - h));
    CHECK(dist4(fd, a.v) <= 1e-8);
    const double acc_fd = (shell_velocity(p, u + h).t - shell_velocity(p, u - h).t) / (2 * h);
    CHECK(acc_fd == doctest::Approx(a.acc.t).epsilon(1e-6));
  }
}

TEST_CASE("mirror branch") {
  const ShellPathParams p{1.2, {0.1, 0.2, 0.0}, {6.0, 0.0, 1.0}};
  const FourVector m0 = mirror_path(p, 0.0);
  CHECK(m0.t == doctest::Approx(-std::hypot(p.tau, norm(p.x1))).epsilon(1e-15));
  CHECK_THROWS_AS(mirror_path(p, 0.5), DomainError);
  for (double u : {0.0, -0.5, -3.0, -100.0}) CHECK(mirror_path(p, u).t <= -p.tau);
  const AsymptoticData d = asymptotic_data(p);
  const double err = dist4(mirror_velocity(p, -1e4), d.l);
  CHECK(err <= 1e-7 * norm(p.y));
}

TEST_CASE("merged path contact points and interpolation") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const ShellPathParams p = random_params(rng);
    CHECK(dist4(merged_path(p, 1.0), shell_path(p, 1.0)) == 0.0);
    CHECK(dist4(merged_path(p, -1.0), mirror_path(p, -1.0)) == 0.0);
    const FourVector mid = 0.5 * (shell_path(p, 1.0) + mirror_path(p, -1.0));
    CHECK(dist4(merged_path(p, 0.0), mid) <= 1e-14 * 10.0);
    const FourVector v = merged_velocity(p, 0.2);
    // Oracle: the endpoint time difference and the resulting velocity norm.
    const Vec3 xp = p.x1 + p.y, xm = p.x1 - p.y;
    const double dt = std::sqrt(p.tau * p.tau + dot(xp, xp)) + std::sqrt(p.tau * p.tau + dot(xm, xm));
    CHECK(dt > 0.0);
    CHECK(v.t == doctest::Approx(0.5 * dt).epsilon(1e-14));
    CHECK(minkowski_dot(v, v) >= 0.0);
    CHECK(dist4(merged_velocity(p, -0.7), v) == 0.0);
  }
}

TEST_CASE("asymptotic data") {
  const ShellPathParams p{1.0, {0, 0, 0}, {1, 0, 0}};
  const AsymptoticData d = asymptotic_data(p);
  CHECK(d.l.t == 1.0);
  CHECK(d.l.x[0] == 1.0);
  CHECK(dist4(d.r, {}) == 0.0);
  CHECK(d.a.t == 0.5);
  CHECK_THROWS_AS(asymptotic_data({1.0, {0, 0, 0}, {0, 0, 0}}), DomainError);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    const AsymptoticData q = asymptotic_data(random_params(rng));
    CHECK(std::fabs(minkowski_dot(q.l, q.r)) <= 1e-12 * 100.0);
    CHECK(std::fabs(minkowski_dot(q.l, q.l)) <= 1e-12 * 100.0);
    CHECK(minkowski_dot(q.a, q.a) > 0.0);
    CHECK(q.a.t > 0.0);
  }
}

TEST_CASE("remainder of the asymptotic expansion falls like u^-2") {
  const ShellPathParams p{1.4, {0.3, -0.2, 0.25}, {4.0, 3.0, 2.0}};
  const AsymptoticData d = asymptotic_data(p);
  std::vector<double> lx, ly;
  for (double u : {1e2, 1e3, 1e4}) {
    lx.push_back(std::log(u));
    ly.push_back(std::log(dist4(shell_path(p, u), asym(d, u))));
  }
  const LinearFit f = fit_line(lx, ly);
  CHECK(f.slope == doctest::Approx(-2.0).epsilon(0.02));
  // Mirror branch has the same expansion for large negative u.
  std::vector<double> my;
  for (double u : {1e2, 1e3, 1e4}) my.push_back(std::log(dist4(mirror_path(p, -u), asym(d, -u))));
  CHECK(fit_line(lx, my).slope == doctest::Approx(-2.0).epsilon(0.02));
}

TEST_CASE("uniform remainder bound and forward cone confinement") {
  std::mt19937_64 rng(5);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const ShellPathParams p = random_params(rng);
    const AsymptoticData d = asymptotic_data(p);
    for (double u : {1.0, 3.0, 10.0, 100.0}) {
      CHECK(in_forward_cone(shell_path(p, u), {}));
      worst = std::max(worst, dist4(shell_path(p, u), asym(d, u)) * u * u);
    }
  }
  CHECK(worst < 1.0);
  // Merged velocity is bounded in Euclidean norm along the whole line.
  const ShellPathParams p = random_params(rng);
  double vmax = 0.0;
  for (double u = -50.0; u <= 50.0; u += 0.01) vmax = std::max(vmax, dist4(merged_velocity(p, u), {}));
  CHECK(vmax < 3.0 * norm(p.y));
}
