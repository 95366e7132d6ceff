#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "conelight/weyl.hpp"

using namespace conelight;

namespace {

const std::array<double, 4> e0{1, 0, 0, 0}, e1{0, 1, 0, 0}, e2{0, 0, 1, 0};

TestField bump(const std::string& label, FourVector c, double r, std::array<double, 4> pol,
               FieldKind kind = FieldKind::four_vector) {
  return make_bump(label, c, r, pol, kind);
}

}  // namespace

TEST_CASE("momentum-space symplectic form matches the position-space commutator integral") {
  struct Case {
    FourVector cf;
    std::array<double, 4> pg, pf;
  };
  // Near light-like, time-like and mixed polarisations.
  const Case cases[] = {{{1.5, {1.2, 0.0, 0.0}}, e0, e0},
                        {{1.0, {0.0, 0.0, 0.0}}, e1, e1},
                        {{-1.3, {0.4, 0.9, 0.0}}, e0, {0.5, 0.3, -1.0, 0.2}}};
  for (const Case& c : cases) {
    const TestField g = bump("g", {}, 0.5, c.pg), f = bump("f", c.cf, 0.4, c.pf);
    const PairingValue m = symplectic(g, f), x = symplectic_position(g, f, 24);
    CAPTURE(m.value);
    CAPTURE(x.value);
    CHECK(std::abs(x.value) > 1e-9);
    CHECK(std::abs(m.value - x.value) <= m.err + x.err + 1e-7 * std::abs(x.value));
    CHECK(std::abs(m.value - x.value) <= 1e-6 * std::abs(x.value));
  }
}

TEST_CASE("symplectic form: antisymmetry, locality and Hermitian dplus") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.5, 1.5), ur(0.3, 0.7);
  auto random_bump = [&](const std::string& l) {
    return bump(l, {u(rng), {u(rng), u(rng), u(rng)}}, ur(rng), {u(rng), u(rng), u(rng), u(rng)});
  };
  for (int i = 0; i < 50; ++i) {
    const TestField g = random_bump("g"), f = random_bump("f");
    const ComplexPairing a = dplus(g, f), b = dplus(f, g);
    CHECK(std::abs(a.value - std::conj(b.value)) <= a.err + b.err + 1e-13);
    CHECK(symplectic(g, f).value == doctest::Approx(-symplectic(f, g).value).epsilon(1e-12));
    CHECK(std::abs(symplectic(f, f).value) <= 1e-15);
  }
  // Spacelike separated supports commute.
  const TestField g = bump("g", {}, 0.5, e0), f = bump("f", {0.0, {2.0, 0.5, 0.0}}, 0.5, e0);
  const PairingValue s = symplectic(g, f);
  CHECK(std::abs(s.value) <= s.err + 1e-12);
  CHECK(symplectic_position(g, f).value == 0.0);
  // Bump sums are bilinear.
  const TestField h = bump("h", {1.0, {0.3, 0.0, 0.0}}, 0.4, e1);
  const double lin = symplectic(sum(scaled(g, 2.0, "2g"), h, "2g+h"), f).value;
  CHECK(lin == doctest::Approx(2.0 * s.value + symplectic(h, f).value).epsilon(1e-12));
}

TEST_CASE("generic momentum route agrees with the bump-pair route") {
  const TestField g = bump("g", {}, 1.0, e0), f = bump("f", {0.8, {0.0, 0.0, 0.3}}, 1.0, {0.4, 0.0, 1.0, 0.0});
  const TestField gw = from_amplitude("gw", [g](const LightlikeMomentum& p) { return g.amplitude(p); });
  const TestField fw = from_amplitude("fw", [f](const LightlikeMomentum& p) { return f.amplitude(p); });
  PairingOptions o;
  o.p_max = 40.0;
  o.panels = 40;
  o.directions = sphere_rule(24, 8);
  const ComplexPairing a = dplus(g, f), b = dplus(gw, fw, o);
  CAPTURE(a.value);
  CAPTURE(b.value);
  CHECK(std::abs(a.value - b.value) <= a.err + b.err + 1e-8 * std::abs(a.value));
  CHECK(b.err < 1e-6 * std::abs(a.value));
}

TEST_CASE("Weyl relations: unit, inverse and associative phases") {
  FieldRegistry reg;
  reg.add(bump("f", {}, 0.5, e1, FieldKind::spatial));
  reg.add(bump("g", {0.9, {0.3, 0.0, 0.0}}, 0.5, {0, 1.0, 0.5, 0.0}, FieldKind::spatial));
  reg.add(bump("h", {-0.7, {0.0, 0.4, 0.0}}, 0.4, e1, FieldKind::spatial));
  const WeylWord f = weyl_generator("f"), g = weyl_generator("g", 0.7), h = weyl_generator("h", -1.3);
  const WeylWord unit;
  const WeylWord fu = weyl_multiply(f, unit, reg);
  CHECK(fu.coeffs == f.coeffs);
  CHECK(fu.phase == cplx(1.0, 0.0));
  const WeylWord inv = weyl_multiply(f, weyl_generator("f", -1.0), reg);
  CHECK(inv.coeffs.empty());
  CHECK(std::abs(inv.phase - 1.0) <= 1e-15);
  const WeylWord l = weyl_multiply(weyl_multiply(f, g, reg), h, reg);
  const WeylWord r = weyl_multiply(f, weyl_multiply(g, h, reg), reg);
  CHECK(l.coeffs == r.coeffs);
  CHECK(std::abs(l.phase - r.phase) <= l.err + r.err + 1e-14);
  CHECK(std::abs(weyl_multiply(f, g, reg).phase - 1.0) > 1e-6);
  // Commutation: W(f) W(g) = exp(i <f, D g>) W(g) W(f).
  const WeylWord fg = weyl_multiply(f, g, reg), gf = weyl_multiply(g, f, reg);
  const PairingValue s = symplectic(reg.get("f"), reg.get("g"));
  CHECK(std::abs(fg.phase - std::exp(cplx(0.0, 0.7 * s.value)) * gf.phase) <= 1e-12);
}

TEST_CASE("vacuum state: bounded on spatial fields, refuses the time component") {
  FieldRegistry reg;
  reg.add(bump("f", {}, 0.5, e1, FieldKind::spatial));
  reg.add(bump("g", {0.9, {0.3, 0.0, 0.0}}, 0.5, {0, 0.2, 1.0, 0.0}, FieldKind::spatial));
  reg.add(bump("t", {}, 0.5, e0));
  for (const WeylWord& w : {WeylWord{}, weyl_generator("f"), weyl_generator("g", 3.0),
                            weyl_multiply(weyl_generator("f", 2.0), weyl_generator("g", -1.0), reg)}) {
    const ComplexPairing v = vacuum_expectation(w, reg);
    CHECK(std::abs(v.value) <= 1.0 + v.err);
  }
  CHECK(vacuum_expectation(WeylWord{}, reg).value == cplx(1.0, 0.0));
  // exp(-|f|^2 / 2) with |f|^2 = -dplus(f, f).
  const double n2 = -dplus(reg.get("f"), reg.get("f")).value.real();
  CHECK(n2 > 0.0);
  CHECK(std::abs(vacuum_expectation(weyl_generator("f"), reg).value) == doctest::Approx(std::exp(-0.5 * n2)));
  CHECK_THROWS_AS(vacuum_expectation(weyl_generator("t"), reg), DomainError);
}

TEST_CASE("field tags and probes") {
  const TestField f = bump("f", {3.0, {0.2, 0.0, 0.0}}, 0.5, e1, FieldKind::spatial);
  CHECK(f.region == RegionTag::forward_cone);
  CHECK(bump("x", {0.2, {}}, 0.5, e1).region == RegionTag::generic);
  CHECK_THROWS_AS(bump("bad", {}, 0.5, e0, FieldKind::spatial), DomainError);
  const FourVector t{1.5, {0.0, 0.0, 0.0}};
  const TestField fs = in_shifted_cone(f, t);
  CHECK(fs.region == RegionTag::shifted_cone);
  CHECK_THROWS_AS(in_shifted_cone(f, {2.7, {}}), DomainError);
  const PhaseFunctional zero = [](const TestField&) { return PairingValue{}; };
  CHECK_NOTHROW(functional_difference(zero, zero, {fs}, t));
  CHECK_THROWS_AS(functional_difference(zero, zero, {f}, t), DomainError);
  CHECK_THROWS_AS(dplus(f, bump("g", {}, 0.5, e1)), DomainError);

  // The Laplace probe tends to the transverse part as eps -> 0.
  const TestField tp = transverse_part(f);
  const LightlikeMomentum p(1.7, normalized({0.3, 0.5, 0.8}));
  double prev = 1e300;
  for (double eps : {0.1, 0.01, 0.001}) {
    const Amplitude d = laplace_probe(f, eps).amplitude(p) - tp.amplitude(p);
    const double e = d.spatial_norm() / tp.amplitude(p).spatial_norm();
    CHECK(e < 3.0 * eps / p.mag);
    CHECK(e < prev);
    prev = e;
  }
  CHECK_THROWS_AS(laplace_probe(f, 0.0), DomainError);
}

TEST_CASE("current phase vanishes for transverse m and follows p . m otherwise") {
  const TestField f = bump("f", {1.0, {0.2, 0.0, 0.0}}, 0.5, {0.3, 1.0, 0.0, 0.5});
  const AmplitudeFn m_perp = [](const LightlikeMomentum& p) {
    Amplitude a;
    a.c[1] = std::exp(-p.mag);
    return transverse_project(a, p.dir);
  };
  CHECK(std::abs(current_phase(m_perp, f).value) <= 1e-14);
  // Longitudinal m = n g(k): the current phase is -2 Im \int dmu conj(-k g) (p . f~).
  const AmplitudeFn m_long = [](const LightlikeMomentum& p) {
    Amplitude a;
    for (int i = 0; i < 3; ++i) a.c[i + 1] = p.dir[i] * std::exp(-p.mag);
    return a;
  };
  const PairingValue v = current_phase(m_long, f);
  CHECK(std::abs(v.value) > 1e-8);
  CHECK(std::abs(v.value) > 10.0 * v.err);
}

TEST_CASE("translation cocycle") {
  // |l~|^2 = e^{-2k} / k: for a time shift the value is -4 pi x0 / (4 + x0^2).
  const AmplitudeFn l = [](const LightlikeMomentum& p) {
    Amplitude a;
    a.c[1] = std::exp(-p.mag) / std::sqrt(p.mag);
    return a;
  };
  CocycleOptions o;
  o.directions = sphere_rule(4, 4);
  CHECK(translation_cocycle(l, {}, o).value == 0.0);
  for (double x0 : {0.05, 0.3, 1.0}) {
    const CocycleValue c = translation_cocycle(l, {x0, {}}, o);
    // The IR ladder stops at 0.0125; the omitted shell is O(x0 eps).
    CHECK(c.value == doctest::Approx(-4.0 * M_PI * x0 / (4.0 + x0 * x0)).epsilon(1e-3));
    CHECK(translation_cocycle(l, {-x0, {}}, o).value == doctest::Approx(-c.value).epsilon(1e-12));
    CHECK(c.partials.size() == 4);
  }
  // A spatial shift needs the full direction rule.
  CocycleOptions os;
  const FourVector xs{0.0, {0.4, 0.0, 0.0}};
  CHECK(std::abs(translation_cocycle(l, xs, os).value) <= 1e-10);

  // |l~|^2 ~ k^-4 is outside L_1 and the IR partials do not settle.
  const AmplitudeFn bad = [](const LightlikeMomentum& p) {
    Amplitude a;
    a.c[1] = std::exp(-p.mag) / (p.mag * p.mag);
    return a;
  };
  CHECK_THROWS_AS(translation_cocycle(bad, {0.5, {}}, o), DomainError);
}
