#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "conelight/fourier.hpp"
#include "conelight/norms.hpp"

namespace conelight {

using AmplitudeFn = std::function<Amplitude(const LightlikeMomentum&)>;

enum class FieldKind { four_vector, spatial };
// Support tags: a ball inside V+, a ball inside V+ + t, or anything else.
enum class RegionTag { generic, forward_cone, shifted_cone };

// Euclidean ball {x : |x - centre|_E <= radius} inside apex + V+ (open cone), with a margin.
bool ball_in_cone(const FourVector& centre, double radius, const FourVector& apex, double margin = 0.0);

// coeff * pol * mollifier(|x - centre|_E / radius); pol holds contravariant components.
struct BumpTerm {
  double coeff = 1.0;
  FourVector centre;
  double radius = 0.5;
  std::array<double, 4> pol{};
};

struct TestField {
  std::string label;
  FieldKind kind = FieldKind::four_vector;
  RegionTag region = RegionTag::generic;
  FourVector apex;  // t of V+ + t when region is shifted_cone
  std::vector<BumpTerm> bumps;
  AmplitudeFn custom;  // used instead of the bumps when set

  bool is_bump_sum() const { return !custom; }
  Amplitude amplitude(const LightlikeMomentum& p) const;
  // Bump sums only: amplitude at any real p (B at the Euclidean length of p).
  Amplitude amplitude_at(const FourVector& p) const;
};

// A single bump; the region tag is forward_cone when the ball lies in V+.
TestField make_bump(std::string label, const FourVector& centre, double radius, const std::array<double, 4>& pol,
                    FieldKind kind = FieldKind::four_vector);
// Re-tags a bump sum as supported in V+ + t; throws if a ball leaves that region.
TestField in_shifted_cone(TestField f, const FourVector& t);
TestField scaled(const TestField& f, double c, std::string label);
TestField sum(const TestField& a, const TestField& b, std::string label);
TestField from_amplitude(std::string label, AmplitudeFn f, FieldKind kind = FieldKind::four_vector);

struct PairingValue {
  double value = 0.0;
  double err = 0.0;
};
struct ComplexPairing {
  cplx value{};
  double err = 0.0;
};

struct PairingOptions {
  double cutoff = 300.0;  // bump pairs: |p| up to cutoff / (sqrt(2) * smallest radius)
  int order = 16;         // Gauss points per radial panel
  // General amplitudes: radial panels on [0, p_max] and a direction rule.
  double p_max = 60.0;
  int panels = 64;
  DirectionRule directions = sphere_rule(16, 32);
};

// \int dmu(p) conj(g~^mu) eta_{mu nu} f~^nu on p0 = |p|, dmu = d^3p / (2 |p|).
ComplexPairing dplus(const TestField& g, const TestField& f, const PairingOptions& o = {});
// <g, D f> = -2 Im dplus(g, f).
PairingValue symplectic(const TestField& g, const TestField& f, const PairingOptions& o = {});
// The same form from position space: (1 / 2 pi) \int d^4x g(x) . eta . (K * f)(x), bump sums only.
PairingValue symplectic_position(const TestField& g, const TestField& f, int order = 16);
// \int d^3p / sqrt(iota + |p|^2) conj(g~) . f~ over spatial components.
ComplexPairing inner_product(const TestField& g, const TestField& f, int iota, const PairingOptions& o = {});

class FieldRegistry {
 public:
  void add(const TestField& f);
  const TestField& get(const std::string& label) const;
  bool contains(const std::string& label) const { return fields_.count(label) > 0; }

 private:
  std::map<std::string, TestField> fields_;
};

// phase * exp(i A(sum_k c_k f_k)); the empty word with phase 1 is the unit.
struct WeylWord {
  cplx phase{1.0, 0.0};
  std::map<std::string, double> coeffs;
  double err = 0.0;  // accumulated uncertainty of the phase
};

WeylWord weyl_generator(const std::string& label, double coeff = 1.0);
// Coefficients add; the phase picks up exp((i/2) <A, D B>) of the two field sums.
WeylWord weyl_multiply(const WeylWord& a, const WeylWord& b, const FieldRegistry& reg, const PairingOptions& o = {});
// phase * exp((1/2) <h, D+ h>) for the reduced field h. Throws if Re <h, D+ h> is positive
// beyond its error, which happens only outside the physical (spatial or divergence-free) fields.
ComplexPairing vacuum_expectation(const WeylWord& w, const FieldRegistry& reg, const PairingOptions& o = {});

// phi_m(h) = <m, D h>, the sign that makes Ad W(m) W(h) = exp(i phi_m(h)) W(h).
PairingValue automorphism_phase(const AmplitudeFn& m, const TestField& h, const PairingOptions& o = {});
// phi_m(delta d f) with (delta d f)~^nu = p^nu (p . f~) on the light cone.
PairingValue current_phase(const AmplitudeFn& m, const TestField& f, const PairingOptions& o = {});

using PhaseFunctional = std::function<PairingValue(const TestField&)>;
// phi_A(f) - phi_B(f) for each probe; every probe must be tagged as supported in V+ + t.
std::vector<PairingValue> functional_difference(const PhaseFunctional& a, const PhaseFunctional& b,
                                                const std::vector<TestField>& probes, const FourVector& t);

// Spatial field with amplitude (p0 - i eps)^-2 (|p|^2 f~ - p (p . f~)).
TestField laplace_probe(const TestField& f, double eps);
// Spatial transverse part f~ - n (n . f~) of a field.
TestField transverse_part(const TestField& f);

struct CocycleOptions {
  std::vector<double> ir_ladder{0.1, 0.05, 0.025, 0.0125};
  double p_max = 100.0;
  int order = 8;  // Gauss points per radial panel
  double stability = 0.05;
  DirectionRule directions = sphere_rule(12, 24);
};

struct CocycleValue {
  double value = 0.0, err = 0.0;
  std::vector<double> partials;  // one per IR ladder entry
  double ir_change = 0.0;        // relative change of the last IR refinement
};

// Im <l, l - l(x)>_0 = -\int d^3p / |p| |l~|^2 sin(p . x), with l(x) the translate by x.
// Throws DomainError when the IR ladder is not Cauchy within `stability`.
CocycleValue translation_cocycle(const AmplitudeFn& l, const FourVector& x, const CocycleOptions& o = {});

}  // namespace conelight
