#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "conelight/fourier.hpp"

namespace conelight {

// A momentum-space field on the light-cone shell, evaluated in batches so that sampled
// amplitudes can share their random numbers across momenta.
struct MomentumField {
  std::string label;
  std::function<std::vector<Amplitude>(const std::vector<LightlikeMomentum>&)> eval;
};

// Wraps a pointwise amplitude; the batch is evaluated in parallel in a fixed order.
MomentumField pointwise_field(std::string label, std::function<Amplitude(const LightlikeMomentum&)> f);
// |p|^-a times a fixed transverse unit vector, with zero error.
MomentumField power_law_field(double a);
MomentumField transverse_field(const MomentumField& f);

// Quadrature over the unit sphere; weights sum to 4 pi.
struct DirectionRule {
  std::vector<Vec3> dirs;
  std::vector<double> weights;
};
// Gauss-Legendre in cos(polar) times a trapezoid in azimuth.
DirectionRule sphere_rule(int n_polar, int n_azimuth);
// For fields whose modulus is invariant under rotations about `axis`: one direction per polar
// node, carrying the weight of its whole ring.
DirectionRule axial_rule(const Vec3& axis, int n_polar);

// `count` well spread unit vectors (spherical Fibonacci, randomly rotated by `seed`), skipping any
// within `exclude_angle` of +-exclude_axis.
std::vector<Vec3> generic_directions(int count, std::uint64_t seed, const Vec3& exclude_axis = {0.0, 0.0, 1.0},
                                     double exclude_angle = 0.0);

enum class Verdict { converged, diverging, inconclusive };
std::string to_string(Verdict v);

struct NormOptions {
  double cauchy_tol = 0.05;  // relative change of the last refinement for "converged"
  int min_halvings = 3;      // increments compared for "diverging"
  double flat_tol = 0.02;    // relative slack when comparing increments
  int radial_order = 8;      // Gauss points in log|p| per ladder shell
  int core_panels = 4;       // panels for the region between the innermost ladder points
  DirectionRule directions = sphere_rule(8, 16);
};

struct Partial {
  std::string region;  // "IR" (lower limit varied) or "UV" (upper limit varied)
  double lo = 0.0, hi = 0.0;
  double value = 0.0, err = 0.0;
  bool ok = true;
};

struct NormReport {
  int iota = 1;
  std::vector<Partial> partials;
  Verdict verdict = Verdict::inconclusive;
  Verdict ir_verdict = Verdict::inconclusive, uv_verdict = Verdict::inconclusive;
  double ir_increment = 0.0, uv_increment = 0.0;  // relative change of the last refinement at each end
  std::optional<double> fitted_ir_exponent, fitted_uv_exponent;
};

// Partial values of \int d^3p / sqrt(iota + |p|^2) |f(p)|^2 over eps <= |p| <= Lambda: the IR
// ladder (decreasing) with Lambda = uv_ladder[0], then the UV ladder (increasing) with
// eps = ir_ladder[0]. |f|^2 is the squared norm of the spatial components.
NormReport iota_norm_partials(const MomentumField& f, int iota, const std::vector<double>& ir_ladder,
                              const std::vector<double>& uv_ladder, const NormOptions& o = {});

class NoiseFloorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DecayFit {
  double slope = 0.0, intercept = 0.0, residual = 0.0;
  double lambda_min = 0.0, lambda_max = 0.0;
  std::vector<Vec3> directions;
  std::vector<double> lambdas, rms, rms_err;  // the fitted points
  std::vector<double> direction_slopes;
};

// Least-squares slope of log(direction-RMS |f(lambda n)|) against log(lambda) at `points`
// log-spaced lambdas; residual is the rms deviation about the line. Throws NoiseFloorError when
// an RMS value is not at least `min_snr` times its error.
DecayFit decay_fit(const MomentumField& f, double lambda_min, double lambda_max, const std::vector<Vec3>& dirs,
                   int points = 8, double min_snr = 3.0);

struct IrProbe {
  std::vector<double> eps;         // the ladder
  std::vector<double> partials;    // \int_{eps < |p| < 1} d^3p / |p| |f|^2
  std::vector<double> increments;  // partial change per halving
  std::vector<double> errs;
  double growth = 0.0;  // geometric mean ratio of consecutive increments
  Verdict verdict = Verdict::inconclusive;
};

// Increments of the L_0 partials toward the infrared. Diverging if the increments do not
// decrease across min_halvings halvings, converged if each one shrinks by more than flat_tol.
IrProbe ir_divergence_probe(const MomentumField& f, const std::vector<double>& eps_ladder, const NormOptions& o = {});

}  // namespace conelight
