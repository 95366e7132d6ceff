#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "conelight/norms.hpp"

using namespace conelight;

namespace {

const std::vector<double> kIr{0.1, 0.05, 0.025, 0.0125, 0.00625};
const std::vector<double> kUv{10.0, 20.0, 40.0, 80.0, 160.0};

NormOptions fast_options() {
  NormOptions o;
  o.directions = sphere_rule(2, 3);
  return o;
}

MomentumField zero_field() {
  return pointwise_field("zero", [](const LightlikeMomentum&) { return Amplitude{}; });
}

}  // namespace

TEST_CASE("direction rules integrate polynomials on the sphere") {
  for (const DirectionRule& r : {sphere_rule(6, 12), axial_rule({1.0, 2.0, 0.5}, 6)}) {
    double w = 0.0;
    for (double x : r.weights) w += x;
    CHECK(w == doctest::Approx(4.0 * M_PI).epsilon(1e-13));
  }
  // z^2 over the sphere is 4 pi / 3; the axial rule sees it along its axis.
  const DirectionRule s = sphere_rule(6, 12), a = axial_rule({0.0, 0.0, 1.0}, 6);
  double zs = 0.0, za = 0.0;
  for (size_t i = 0; i < s.dirs.size(); ++i) zs += s.weights[i] * s.dirs[i][2] * s.dirs[i][2];
  for (size_t i = 0; i < a.dirs.size(); ++i) za += a.weights[i] * a.dirs[i][2] * a.dirs[i][2];
  CHECK(zs == doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-13));
  CHECK(za == doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-13));
}

TEST_CASE("generic directions are unit, spread, deterministic and avoid the excluded cap") {
  const Vec3 ax{0.0, 1.0, 0.0};
  const auto a = generic_directions(8, 11, ax, 0.3), b = generic_directions(8, 11, ax, 0.3);
  const auto c = generic_directions(8, 12, ax, 0.3);
  REQUIRE(a.size() == 8);
  double min_sep = 10.0;
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(norm(a[i]) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(dot(a[i], ax)) <= std::cos(0.3));
    for (int k = 0; k < 3; ++k) CHECK(a[i][k] == b[i][k]);
    for (size_t j = 0; j < i; ++j) min_sep = std::min(min_sep, norm(a[i] - a[j]));
  }
  CHECK(min_sep > 0.5);
  CHECK(norm(a[0] - c[0]) > 1e-6);
}

TEST_CASE("zero field has zero partials and converges") {
  const NormReport r = iota_norm_partials(zero_field(), 1, kIr, kUv, fast_options());
  for (const Partial& p : r.partials) CHECK(p.value == 0.0);
  CHECK(r.verdict == Verdict::converged);
}

TEST_CASE("synthetic power laws are classified at both ends") {
  struct Case {
    double a;
    int iota;
    Verdict ir, uv;
  };
  const Verdict C = Verdict::converged, D = Verdict::diverging;
  // iota = 0: d^3p / |p| |p|^-2a converges at the IR for a < 1 and at the UV for a > 1.
  // iota = 1: the IR bound moves to a < 3/2, the UV bound stays at a > 1 with a log at a = 1.
  const Case cases[] = {{0.5, 0, C, D}, {1.0, 0, D, D}, {1.5, 0, D, C},
                        {0.5, 1, C, D}, {1.0, 1, C, D}, {1.5, 1, D, C}};
  for (const Case& c : cases) {
    CAPTURE(c.a);
    CAPTURE(c.iota);
    const NormReport r = iota_norm_partials(power_law_field(c.a), c.iota, kIr, kUv, fast_options());
    CHECK(r.ir_verdict == c.ir);
    CHECK(r.uv_verdict == c.uv);
    CHECK(r.verdict == (c.ir == C && c.uv == C ? C : D));
    if (c.iota == 0) {
      REQUIRE(r.fitted_ir_exponent.has_value());
      REQUIRE(r.fitted_uv_exponent.has_value());
      CHECK(*r.fitted_ir_exponent == doctest::Approx(c.a).epsilon(1e-6));
      CHECK(*r.fitted_uv_exponent == doctest::Approx(c.a).epsilon(1e-6));
    }
  }
}

TEST_CASE("partials are monotone and ordered in iota") {
  const MomentumField f = power_law_field(0.8);
  const NormReport r0 = iota_norm_partials(f, 0, kIr, kUv, fast_options());
  const NormReport r1 = iota_norm_partials(f, 1, kIr, kUv, fast_options());
  REQUIRE(r0.partials.size() == r1.partials.size());
  for (size_t i = 0; i < r0.partials.size(); ++i) {
    CHECK(r1.partials[i].value <= r0.partials[i].value);
    if (i > 0 && r0.partials[i].region == r0.partials[i - 1].region) {
      CHECK(r0.partials[i].value >= r0.partials[i - 1].value);
      CHECK(r1.partials[i].value >= r1.partials[i - 1].value);
    }
  }
}

TEST_CASE("gradient of the inverse Laplacian of the initial density lies in L_1") {
  const ChargeConfig c = default_config();
  const MomentumField f = pointwise_field("grad_inv_laplacian_rho0", [&](const LightlikeMomentum& p) {
    return grad_inv_laplacian({amp_rho_0(c, p.mag), 0.0}, p);
  });
  NormOptions o;
  o.directions = sphere_rule(1, 1);  // rho_0 depends on |p| only
  const NormReport r = iota_norm_partials(f, 1, {0.1, 0.05, 0.025, 0.0125}, {4.0, 8.0, 16.0, 32.0}, o);
  CHECK(r.ir_verdict == Verdict::converged);
  CHECK(r.uv_verdict == Verdict::converged);
  // With iota = 0 the same field has a logarithmic infrared divergence.
  const NormReport r0 = iota_norm_partials(f, 0, {0.1, 0.05, 0.025, 0.0125}, {4.0, 8.0, 16.0, 32.0}, o);
  CHECK(r0.ir_verdict == Verdict::diverging);
}

TEST_CASE("decay fit recovers synthetic slopes and refuses noise") {
  const auto dirs = generic_directions(4, 3);
  const DecayFit fit = decay_fit(power_law_field(2.0), 10.0, 300.0, dirs);
  CHECK(fit.slope == doctest::Approx(-2.0).epsilon(1e-6));
  CHECK(fit.residual <= 1e-10);
  REQUIRE(fit.direction_slopes.size() == 4);
  for (double s : fit.direction_slopes) CHECK(s == doctest::Approx(-2.0).epsilon(1e-6));
  const MomentumField noisy = pointwise_field("noisy", [](const LightlikeMomentum& p) {
    Amplitude a;
    a.c[1] = 1.0 / p.mag;
    a.err = 1.0 / p.mag;
    return a;
  });
  CHECK_THROWS_AS(decay_fit(noisy, 10.0, 300.0, dirs), NoiseFloorError);
  CHECK_THROWS_AS(decay_fit(power_law_field(2.0), 300.0, 10.0, dirs), DomainError);
}

TEST_CASE("infrared probe separates a log divergence from a convergent field") {
  const NormOptions o = fast_options();
  const std::vector<double> eps{0.1, 0.05, 0.025, 0.0125};
  const IrProbe log_div = ir_divergence_probe(power_law_field(1.0), eps, o);
  CHECK(log_div.verdict == Verdict::diverging);
  CHECK(log_div.growth == doctest::Approx(1.0).epsilon(1e-9));
  // Closed form: each halving adds 4 pi ln 2.
  for (double inc : log_div.increments) CHECK(inc == doctest::Approx(4.0 * M_PI * std::log(2.0)).epsilon(1e-9));
  const IrProbe conv = ir_divergence_probe(power_law_field(0.5), eps, o);
  CHECK(conv.verdict == Verdict::converged);
  CHECK(conv.growth == doctest::Approx(0.5).epsilon(1e-9));
  CHECK_THROWS_AS(ir_divergence_probe(power_law_field(1.0), {0.1, 1e-5}, o), DomainError);
}
