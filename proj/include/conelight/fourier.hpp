#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "conelight/profiles.hpp"
#include "conelight/qmc.hpp"
#include "conelight/quadrature.hpp"
#include "conelight/worldline.hpp"

namespace conelight {

// Fourier prefactor (2 pi)^-2 of f~(p) = (2 pi)^-2 \int d^4x e^{i p.x} f(x).
constexpr double kFourierPrefactor = 1.0 / (4.0 * M_PI * M_PI);

// Momentum on the forward light cone: p0 = mag, spatial part mag * dir.
struct LightlikeMomentum {
  double mag = 1.0;
  Vec3 dir{0.0, 0.0, 1.0};
  LightlikeMomentum() = default;
  LightlikeMomentum(double mag, const Vec3& dir);
  FourVector four() const { return {mag, mag * dir}; }
  Vec3 vec() const { return mag * dir; }
};

struct Amplitude {
  std::array<cplx, 4> c{};
  double err = 0.0;

  std::array<cplx, 3> spatial() const { return {c[1], c[2], c[3]}; }
  double spatial_norm() const;
  Amplitude& operator+=(const Amplitude& o);
};

Amplitude operator-(const Amplitude& a, const Amplitude& b);
Amplitude operator*(cplx s, const Amplitude& a);

struct ScalarAmplitude {
  cplx value{};
  double err = 0.0;
};

struct QuadratureConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_refine = 40;
  std::uint64_t qmc_samples = 1 << 14;
  std::uint64_t seed = 20240611;
  int replicates = 8;

  void validate() const;
  QmcOptions qmc() const;
};

// Raised when adaptive refinement stops short of the tolerance; carries the best estimate.
class QuadratureFailure : public std::runtime_error {
 public:
  QuadratureFailure(const std::string& what, Amplitude best) : std::runtime_error(what), best_(best) {}
  const Amplitude& best() const { return best_; }

 private:
  Amplitude best_;
};

using PathFunction = std::function<PathPoint(double)>;

PathFunction shell_path_fn(const ShellPathParams& p);
PathFunction mirror_path_fn(const ShellPathParams& p);

// (2 pi)^-2 \int_{u0}^{u1} du z'(u) e^{i p.z(u)} by adaptive panels sized to the local phase rate.
Amplitude path_amplitude(const PathFunction& path, double u0, double u1, const FourVector& p,
                         const QuadratureConfig& q);

// Same integral over [u0, inf) for side = +1 or (-inf, u0] for side = -1. The path must be
// asymptotically light-like with p.l != 0; the far part is integrated by parts twice.
Amplitude path_amplitude_tail(const PathFunction& path, double u0, int side, const FourVector& p,
                              const QuadratureConfig& q);

// Amplitude of the shell branch u >= 1 minus that of its straight asymptote u l + r.
Amplitude shell_branch_remainder(const ShellPathParams& params, const FourVector& p, const QuadratureConfig& q);

// Whole three-piece path: both branches plus the straight interpolation on [-1, 1].
Amplitude merged_path_amplitude(const ShellPathParams& params, const FourVector& p, const QuadratureConfig& q);

// Closed-form amplitude of the interpolation segment.
Amplitude interpolation_amplitude(const ShellPathParams& params, const FourVector& p);

// Transverse part of the spatial components with respect to n; time component set to zero.
Amplitude transverse_project(const Amplitude& a, const Vec3& n);

// Spatial multiplier -i p / |p|^2 applied to a scalar amplitude.
Amplitude grad_inv_laplacian(const ScalarAmplitude& rho, const LightlikeMomentum& p);

// Transverse smeared density rho_n(x) by direct quadrature over the ball point and path parameter.
Vec3 rho_n(const ChargeConfig& c, const Vec3& n, const Vec3& x, int ball_order = 16, int u_order = 24);
// The same integral without the projector.
Vec3 coulomb_direct(const ChargeConfig& c, const Vec3& x, int ball_order = 16, int u_order = 24);

// Smeared amplitudes by scrambled Sobol sampling of the charge.
Amplitude amp_m_s(const ChargeConfig& c, double s, const LightlikeMomentum& p, const QuadratureConfig& q);
Amplitude amp_m_reg(const ChargeConfig& c, const LightlikeMomentum& p, const QuadratureConfig& q);
// Interpolation piece alone, smeared; at p = 0 it reduces to the mean endpoint difference.
Amplitude amp_m_interp(const ChargeConfig& c, const FourVector& p, const QuadratureConfig& q);
// Initial density rho_0 on the light cone. It depends only on k = |p| because theta1 is
// rotation invariant; computed by deterministic Gauss quadrature in (tau, |x1|).
cplx amp_rho_0(const ChargeConfig& c, double k);
ScalarAmplitude amp_rho_s(const ChargeConfig& c, double s, const FourVector& p, const QuadratureConfig& q);

// Several momenta at once with common random numbers (same sample points for every momentum).
std::vector<Amplitude> amp_m_reg_batch(const ChargeConfig& c, const std::vector<LightlikeMomentum>& ps,
                                       const QuadratureConfig& q);

// Reference integrator for tests: scrambled Sobol over a box with a replicate error bar.
struct OracleResult {
  std::vector<double> value;
  std::vector<double> err;
};
OracleResult oracle_quadrature(const std::function<void(const double* x, double* out)>& f,
                               const std::vector<std::pair<double, double>>& box, int ncomp, std::uint64_t samples,
                               std::uint64_t seed, int replicates = 8);

}  // namespace conelight
