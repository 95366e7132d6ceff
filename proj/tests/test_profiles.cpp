#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>

#include "conelight/profiles.hpp"

using namespace conelight;

namespace {

// Dense trapezoid integral, independent of the library's Gauss rules.
template <class F>
double trapezoid(F&& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = 0.5 * (f(a) + f(b));
  for (int i = 1; i < n; ++i) s += f(a + i * h);
  return s * h;
}

double raw_bump(double t) { return std::fabs(t) < 1.0 ? std::exp(-1.0 / (1.0 - t * t)) : 0.0; }

}  // namespace

TEST_CASE("theta0 support and normalization") {
  const ChargeConfig c = default_config();
  CHECK(eval_theta0(c.theta0, c.theta0.lo() / 2) == 0.0);
  CHECK(eval_theta0(c.theta0, 2.5) == 0.0);
  const double integral = trapezoid([&](double t) { return eval_theta0(c.theta0, t); }, 1.0, 2.0, 200000);
  CHECK(integral == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(total_charge(c) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sigma value at mid radius matches a renormalized dense grid") {
  const ChargeConfig c = default_config();
  const double R = 5.0, Rb = 8.0, mid = 6.5, half = 1.5;
  // Radial normalization by dense trapezoid on rho^2 profile.
  const double nr = trapezoid([&](double r) { return r * r * raw_bump((r - mid) / half); }, R, Rb, 400000);
  // Angular cap normalization, polar angle measured from the axis.
  const double a = M_PI / 3.0;
  const double na = 2.0 * M_PI * trapezoid([&](double th) { return std::sin(th) * raw_bump(th / a); }, 0.0, a, 400000);
  for (double th : {0.0, 0.3, 0.7}) {
    const Vec3 y{mid * std::cos(th), mid * std::sin(th), 0.0};
    const double oracle = raw_bump(0.0) / nr * raw_bump(th / a) / na;
    const double v = eval_sigma(c.sigma, y);
    CHECK(v > 0.0);
    CHECK(v == doctest::Approx(oracle).epsilon(1e-8));
  }
  CHECK(eval_sigma(c.sigma, {0.0, 6.5, 0.0}) == 0.0);  // outside the cap
}

TEST_CASE("isotropic sigma is radial") {
  ChargeConfig c = make_config(1, 2, 0.5, 5, 8, 1, 1, {0, 0, 1}, M_PI);
  const double v1 = eval_sigma(c.sigma, {6.0, 0.0, 0.0});
  const double v2 = eval_sigma(c.sigma, {0.0, -6.0, 0.0});
  CHECK(v1 == doctest::Approx(v2).epsilon(1e-15));
}

TEST_CASE("theta1 integrates to one") {
  const ChargeConfig c = default_config();
  const double v = 4.0 * M_PI * trapezoid([&](double r) { return r * r * c.theta1.eval_radial(r); }, 0.0, 0.5, 200000);
  CHECK(v == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(eval_theta1(c.theta1, {0.5, 0.0, 0.0}) == 0.0);
}

TEST_CASE("scaling of sigma") {
  const ChargeConfig c = default_config();
  CHECK_THROWS_AS(scale_sigma(c, 0.5), DomainError);
  const ChargeConfig c1 = scale_sigma(c, 1.0);
  const Vec3 y{6.0, 0.5, 0.1};
  CHECK(eval_sigma_scaled(c1, y) == eval_sigma(c.sigma, y));
  const ChargeConfig c2 = scale_sigma(c, 2.0);
  CHECK(eval_sigma_scaled(c2, {9.99, 0, 0}) == 0.0);
  CHECK(eval_sigma_scaled(c2, {16.01, 0, 0}) == 0.0);
  CHECK(eval_sigma_scaled(c2, {13.0, 0, 0}) > 0.0);
  // Integral of sigma_16 in spherical coordinates about the cap axis.
  const ChargeConfig c16 = scale_sigma(c, 16.0);
  const double rad = trapezoid(
      [&](double r) {
        // Polar integral in u = cos(theta) over the cap.
        return r * r * 2.0 * M_PI *
               trapezoid([&](double u) { return eval_sigma_scaled(c16, {r * u, r * std::sqrt(1.0 - u * u), 0}); }, 0.5, 1.0,
                         20000);
      },
      80.0, 128.0, 2000);
  CHECK(std::fabs(rad - 1.0) <= 1e-8);
}

TEST_CASE("separation inequality") {
  CHECK(separation_ok(make_config(1, 2, 0.5, 5, 8, 1)));
  CHECK(separation_threshold(1, 2, 0.5) == doctest::Approx(4.0));
  CHECK_FALSE(separation_ok(make_config(1, 2, 0.5, 4, 8, 1)));
  CHECK(separation_threshold(1, 1, 0.0) == 0.0);
  CHECK(0.1 > separation_threshold(1, 1, 0.0));
}

TEST_CASE("total charge is linear in theta0 and the smeared divergence integrates to zero") {
  ChargeConfig c = default_config();
  CHECK(total_charge(c) == doctest::Approx(1.0));
  ChargeConfig c2 = make_config(1, 2, 0.5, 5, 8, 2.0);
  CHECK(total_charge(c2) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::fabs(divergence_integral(c, 20, 16)) <= 1e-6);
}

TEST_CASE("profiles are smooth across their support boundaries") {
  const ChargeConfig c = default_config();
  // Each estimate must settle as the step halves; a jump in the function or a
  // low derivative would make the estimates grow like an inverse power of h.
  auto probe = [](auto f, double x0) {
    auto diffs = [&](double h) {
      return std::array<double, 4>{
          (f(x0 + h) - f(x0 - h)) / (2 * h), (f(x0 + h) - 2 * f(x0) + f(x0 - h)) / (h * h),
          (f(x0 + 2 * h) - 2 * f(x0 + h) + 2 * f(x0 - h) - f(x0 - 2 * h)) / (2 * h * h * h),
          (f(x0 + 2 * h) - 4 * f(x0 + h) + 6 * f(x0) - 4 * f(x0 - h) + f(x0 - 2 * h)) / (h * h * h * h)};
    };
    const auto coarse = diffs(1e-2), mid = diffs(5e-3), fine = diffs(2.5e-3);
    double worst = 0.0;
    for (int k = 0; k < 4; ++k) {
      const double ref = std::fabs(coarse[k]) + 1e-9;
      worst = std::max({worst, std::fabs(mid[k]) / ref, std::fabs(fine[k]) / ref});
    }
    return worst;
  };
  CHECK(probe([&](double t) { return c.theta0.eval(t); }, 1.0) < 2.0);
  CHECK(probe([&](double t) { return c.theta0.eval(t); }, 2.0) < 2.0);
  CHECK(probe([&](double r) { return c.theta1.eval_radial(r); }, 0.5) < 2.0);
  CHECK(probe([&](double r) { return c.sigma.eval_radial(r); }, 5.0) < 2.0);
  CHECK(probe([&](double r) { return c.sigma.eval_radial(r); }, 8.0) < 2.0);
  CHECK(probe([&](double th) { return c.sigma.eval_angular_polar(th); }, M_PI / 3.0) < 2.0);
}

TEST_CASE("convolution of nonnegative profiles is nonnegative") {
  const ChargeConfig c = default_config();
  for (double r : {4.6, 5.0, 6.5, 8.3}) {
    for (double th : {0.0, 0.5, 1.1, 2.0}) {
      const Vec3 x{r * std::cos(th), r * std::sin(th), 0.0};
      CHECK(convolution_theta1_sigma(c, x, 12) >= 0.0);
    }
  }
}

TEST_CASE("inverse cdf sampler reproduces integrals") {
  InverseCdf inv([](double x) { return x * x; }, 0.0, 2.0, 512);
  CHECK(inv.abs_mass() == doctest::Approx(8.0 / 3.0).epsilon(1e-5));
  double est = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    double ratio;
    const double x = inv.sample((i + 0.5) / n, &ratio);
    est += ratio * std::cos(x);
  }
  est /= n;
  // \int_0^2 x^2 cos x dx
  const double exact = 4.0 * std::cos(2.0) + 2.0 * std::sin(2.0);
  CHECK(est == doctest::Approx(exact).epsilon(1e-5));
}
