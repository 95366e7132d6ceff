#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "conelight/fourier.hpp"
#include "conelight/profiles.hpp"
#include "conelight/weyl.hpp"

namespace conelight {

inline constexpr const char* kVersion = "0.1.0";

// Bad flags, malformed JSON or a configuration that fails validation (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A bump probe in absolute coordinates: centre (t, x, y, z), Euclidean radius, spatial polarisation.
struct ProbeSpec {
  std::array<double, 4> centre{};
  double radius = 0.5;
  Vec3 pol{1.0, 0.0, 0.0};
};

struct RunConfig {
  // Charge scalars, see make_config.
  double tau1 = 1.0, tau2 = 2.0, r = 0.5, R = 5.0, Rbar = 8.0, q = 1.0;
  Vec3 axis{1.0, 0.0, 0.0};
  double aperture = M_PI / 3.0;

  QuadratureConfig quad;  // quad.seed is the run seed: QMC, random directions and random probes

  // Momentum grid for `field`: explicit directions, or `direction_count` generic ones.
  std::vector<double> mags{1.0, 10.0, 100.0};
  std::vector<Vec3> directions;
  int direction_count = 2;
  std::string field = "m_inf";  // m_s, m_inf or m_reg
  double field_s = 4.0;

  // Decay window for m_infinity.
  double lambda_min = 10.0, lambda_max = 300.0;
  int decay_points = 8, decay_directions = 8;

  // Limit scan: s ladder, probe of the gauge-bridge functional and probe of the constancy check.
  std::vector<double> s_ladder{1, 2, 4, 8, 16, 32, 64};
  ProbeSpec bridge_probe{{3.0, 0.0, 0.0, 0.0}, 0.5, {1.0, 0.0, 0.0}};
  ProbeSpec constancy_probe{{30.0, 20.0, 0.0, 0.0}, 0.5, {1.0, 0.0, 0.0}};

  // Huygens suites: shift t, and explicit probes or `probe_count` random ones in V+ + t.
  std::array<double, 4> t_shift{20.0, 0.0, 0.0, 0.0};
  int probe_count = 20;
  std::vector<ProbeSpec> probes;

  std::string out_dir = "out";

  ChargeConfig charge() const;
  // Throws ConfigError on empty ladders, inverted windows, bad quadrature settings or a
  // charge configuration that violates the separation condition.
  void validate() const;
};

// Canonical JSON (fixed key order, every field present) and its SHA-256 hex digest.
std::string canonical_json(const RunConfig& c);
std::string config_digest(const RunConfig& c);
// Missing keys keep their defaults; unknown keys are rejected.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

FourVector to_four(const std::array<double, 4>& a);
TestField probe_field(const ProbeSpec& p, const std::string& label);
// Momentum directions of the `field` grid.
std::vector<Vec3> grid_directions(const RunConfig& c);
// Explicit probes, or `probe_count` seeded random balls inside V+ + t.
std::vector<ProbeSpec> huygens_probes(const RunConfig& c);

}  // namespace conelight
