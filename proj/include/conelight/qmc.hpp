#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "conelight/profiles.hpp"

namespace conelight {

// Number of worker threads, capped by CONELIGHT_THREADS when set.
int thread_count();

std::uint64_t splitmix64(std::uint64_t x);

// Sobol points with hash-based nested uniform (Owen) scrambling.
// Point i is the Gray-code ordered Sobol point i, so the first 2^m points form a net.
class SobolStream {
 public:
  SobolStream(unsigned dim, std::uint64_t seed);
  ~SobolStream();
  SobolStream(const SobolStream&) = delete;
  SobolStream& operator=(const SobolStream&) = delete;

  void seek(std::uint64_t index);
  // Writes the next point into u[0..dim), each coordinate in (0, 1).
  void next(double* u);
  unsigned dim() const { return dim_; }

 private:
  struct Engine;
  unsigned dim_;
  std::vector<std::uint32_t> seeds_;
  std::unique_ptr<Engine> engine_;
  std::uint64_t index_ = 0;
};

struct QmcOptions {
  std::uint64_t samples = 1 << 14;  // points per replicate
  int replicates = 8;
  std::uint64_t seed = 0x5eed;
  bool parallel = true;
};

// Mean over replicates and an error bar of three standard errors per component.
struct QmcResult {
  std::vector<double> value;
  std::vector<double> err;
};

// f(u, out) accumulates nothing itself: it writes ncomp values for the point u in [0,1)^dim.
using QmcIntegrand = std::function<void(const double* u, double* out)>;

// Block partial sums are combined in a fixed order, so the parallel and serial
// paths return bit-identical results.
QmcResult qmc_integrate(unsigned dim, int ncomp, const QmcIntegrand& f, const QmcOptions& opt);
QmcResult qmc_integrate_serial(unsigned dim, int ncomp, const QmcIntegrand& f, const QmcOptions& opt);

// One draw of the smeared charge: time shell tau, ball point x1 and annulus point y.
// The weight makes E[weight * g] = \int dtau dx1 dy theta0 theta1 sigma g.
struct ChargeSample {
  double tau = 1.0;
  Vec3 x1{0.0, 0.0, 0.0};
  Vec3 y{1.0, 0.0, 0.0};
  double weight = 0.0;
};

// Maps seven uniforms to a ChargeSample. y is drawn from the unscaled sigma; callers scale by s.
class ChargeSampler {
 public:
  static constexpr unsigned kDim = 7;
  explicit ChargeSampler(const ChargeConfig& c, int cells = 2048);
  ChargeSample map(const double* u) const;
  const ChargeConfig& config() const { return c_; }

 private:
  ChargeConfig c_;
  InverseCdf tau_, ball_, radial_, cap_;
  Vec3 d_, e1_, e2_;
  double cap_max_;
};

}  // namespace conelight
