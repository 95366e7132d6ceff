#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "conelight/spacetime.hpp"

using namespace conelight;

TEST_CASE("minkowski products of simple vectors") {
  CHECK(minkowski_dot({1, {0, 0, 0}}, {1, {0, 0, 0}}) == 1.0);
  CHECK(minkowski_dot({1, {1, 0, 0}}, {1, {1, 0, 0}}) == 0.0);
  CHECK(minkowski_dot({5, {4, 0, 0}}, {5, {4, 0, 0}}) == 9.0);
}

TEST_CASE("open forward cone membership") {
  CHECK(in_forward_cone({1, {0, 0, 0}}, {}));
  CHECK_FALSE(in_forward_cone({1, {1, 0, 0}}, {}));
  // Offset apex: the difference is (3, -2, 0, 0) and 3 > 2.
  const FourVector p{3, {0, 0, 0}}, apex{0, {2, 0, 0}};
  const FourVector d = p - apex;
  const bool oracle = d.t > std::sqrt(d.x[0] * d.x[0] + d.x[1] * d.x[1] + d.x[2] * d.x[2]);
  CHECK(in_forward_cone(p, apex) == oracle);
  CHECK(oracle);
}

TEST_CASE("spacelike separation") {
  CHECK(spacelike_separated({0, {1, 0, 0}}, {}));
  CHECK_FALSE(spacelike_separated({}, {}));
  CHECK(spacelike_separated({1, {3, 0, 0}}, {}));
}

TEST_CASE("time shell map and inverse") {
  const FourVector a = xi({1.0, {0, 0, 0}});
  CHECK(a.t == 1.0);
  const FourVector b = xi({3.0, {4, 0, 0}});
  CHECK(b.t == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(b.x[0] == 4.0);
  const ShellCoords c = xi_inverse({5, {4, 0, 0}});
  CHECK(c.tau == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(c.x[0] == 4.0);
  CHECK_THROWS_AS(xi_inverse({1, {2, 0, 0}}), DomainError);
  CHECK_THROWS_AS(xi_inverse({1, {1, 0, 0}}), DomainError);
}

TEST_CASE("round trip over many scales") {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> logtau(-3.0, 3.0), comp(-1.0, 1.0), logx(-3.0, 2.0);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    ShellCoords c;
    c.tau = std::pow(10.0, logtau(rng));
    // The inverse loses about (|x|/tau)^2 ulps near the cone, so offsets are
    // drawn up to 100 tau where that conditioning still allows 1e-12.
    const double scale = c.tau * std::pow(10.0, logx(rng));
    c.x = {scale * comp(rng), scale * comp(rng), scale * comp(rng)};
    const FourVector p = xi(c);
    REQUIRE(in_forward_cone(p, {}));
    const ShellCoords back = xi_inverse(p);
    // Relative to the size of the point: tau is recovered from t^2 - x^2.
    const double ref = std::max(c.tau, norm(c.x));
    worst = std::max(worst, std::fabs(back.tau - c.tau) / c.tau * (c.tau / ref));
    worst = std::max(worst, norm(back.x - c.x) / ref);
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("minkowski product symmetry and bilinearity") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n01;
  auto rv = [&] { return FourVector{n01(rng), {n01(rng), n01(rng), n01(rng)}}; };
  for (int i = 0; i < 200; ++i) {
    const FourVector a = rv(), b = rv(), c = rv();
    const double s = n01(rng);
    CHECK(minkowski_dot(a, b) == minkowski_dot(b, a));
    const double lhs = minkowski_dot(a + s * b, c);
    const double rhs = minkowski_dot(a, c) + s * minkowski_dot(b, c);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12).scale(10.0));
  }
}
