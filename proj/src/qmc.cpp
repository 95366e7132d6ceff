#include "conelight/qmc.hpp"

#include <omp.h>

#include <algorithm>
#include <boost/random/sobol.hpp>
#include <cmath>
#include <cstdlib>
#include <string>

namespace conelight {

int thread_count() {
  int n = omp_get_max_threads();
  if (const char* env = std::getenv("CONELIGHT_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap > 0) n = std::min(n, cap);
    } catch (const std::exception&) {
    }
  }
  return std::max(n, 1);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

std::uint32_t reverse_bits(std::uint32_t x) {
  x = ((x >> 1) & 0x55555555u) | ((x & 0x55555555u) << 1);
  x = ((x >> 2) & 0x33333333u) | ((x & 0x33333333u) << 2);
  x = ((x >> 4) & 0x0f0f0f0fu) | ((x & 0x0f0f0f0fu) << 4);
  x = ((x >> 8) & 0x00ff00ffu) | ((x & 0x00ff00ffu) << 8);
  return (x >> 16) | (x << 16);
}

// Laine-Karras style hash: each output bit depends only on the same and lower input bits,
// which on bit-reversed input gives a nested uniform scramble.
std::uint32_t lk_permute(std::uint32_t x, std::uint32_t seed) {
  x += seed;
  x ^= x * 0x6c50b47cu;
  x ^= x * 0xb82f1e52u;
  x ^= x * 0xc7afe638u;
  x ^= x * 0x8d22f6e6u;
  return x;
}

std::uint32_t owen_scramble(std::uint32_t x, std::uint32_t seed) {
  return reverse_bits(lk_permute(reverse_bits(x), seed));
}

}  // namespace

struct SobolStream::Engine {
  explicit Engine(unsigned dim) : gen(dim) {}
  boost::random::sobol gen;
};

SobolStream::SobolStream(unsigned dim, std::uint64_t seed) : dim_(dim), engine_(std::make_unique<Engine>(dim)) {
  seeds_.resize(dim);
  std::uint64_t h = splitmix64(seed);
  for (unsigned d = 0; d < dim; ++d) {
    h = splitmix64(h + d);
    seeds_[d] = static_cast<std::uint32_t>(h >> 32);
  }
}

SobolStream::~SobolStream() = default;

void SobolStream::seek(std::uint64_t index) {
  index_ = index;
  // The engine's seed(k) positions at Gray-code index k + 1; index 0 is the origin.
  if (index > 0) engine_->gen.seed(index - 1);
}

void SobolStream::next(double* u) {
  for (unsigned d = 0; d < dim_; ++d) {
    const std::uint32_t raw = index_ == 0 ? 0u : static_cast<std::uint32_t>(engine_->gen() >> 32);
    const std::uint32_t s = owen_scramble(raw, seeds_[d]);
    u[d] = (static_cast<double>(s) + 0.5) * 0x1p-32;
  }
  ++index_;
  if (index_ == 1) engine_->gen.seed(0);
}

namespace {

constexpr std::uint64_t kBlock = 1024;

QmcResult integrate_impl(unsigned dim, int ncomp, const QmcIntegrand& f, const QmcOptions& opt, bool parallel) {
  if (opt.samples == 0 || opt.replicates < 2) throw DomainError("qmc_integrate: need samples > 0 and >= 2 replicates");
  const std::uint64_t nblocks = (opt.samples + kBlock - 1) / kBlock;
  const int R = opt.replicates;
  const std::uint64_t jobs = nblocks * static_cast<std::uint64_t>(R);
  std::vector<double> partial(jobs * ncomp, 0.0);

  auto run_block = [&](std::uint64_t job, SobolStream& stream, std::vector<double>& u, std::vector<double>& out) {
    const std::uint64_t b = job % nblocks;
    const std::uint64_t begin = b * kBlock, end = std::min(opt.samples, begin + kBlock);
    double* acc = partial.data() + job * ncomp;
    stream.seek(begin);
    for (std::uint64_t i = begin; i < end; ++i) {
      stream.next(u.data());
      f(u.data(), out.data());
      for (int k = 0; k < ncomp; ++k) acc[k] += out[k];
    }
  };

  auto stream_seed = [&](int r) { return splitmix64(opt.seed ^ (0xa5a5a5a5ULL * (r + 1))); };

  if (parallel) {
#pragma omp parallel num_threads(thread_count())
    {
      std::vector<double> u(dim), out(ncomp);
      std::unique_ptr<SobolStream> stream;
      int current = -1;
#pragma omp for schedule(dynamic, 1)
      for (std::int64_t j = 0; j < static_cast<std::int64_t>(jobs); ++j) {
        const int r = static_cast<int>(j / nblocks);
        if (r != current) {
          stream = std::make_unique<SobolStream>(dim, stream_seed(r));
          current = r;
        }
        run_block(j, *stream, u, out);
      }
    }
  } else {
    std::vector<double> u(dim), out(ncomp);
    for (int r = 0; r < R; ++r) {
      SobolStream stream(dim, stream_seed(r));
      for (std::uint64_t b = 0; b < nblocks; ++b) run_block(r * nblocks + b, stream, u, out);
    }
  }

  QmcResult res;
  res.value.assign(ncomp, 0.0);
  res.err.assign(ncomp, 0.0);
  std::vector<double> rep(R * ncomp, 0.0);
  for (int r = 0; r < R; ++r)
    for (std::uint64_t b = 0; b < nblocks; ++b)
      for (int k = 0; k < ncomp; ++k) rep[r * ncomp + k] += partial[(r * nblocks + b) * ncomp + k];
  for (double& v : rep) v /= static_cast<double>(opt.samples);
  for (int k = 0; k < ncomp; ++k) {
    double mean = 0.0;
    for (int r = 0; r < R; ++r) mean += rep[r * ncomp + k];
    mean /= R;
    double var = 0.0;
    for (int r = 0; r < R; ++r) var += (rep[r * ncomp + k] - mean) * (rep[r * ncomp + k] - mean);
    var /= (R - 1);
    res.value[k] = mean;
    res.err[k] = 3.0 * std::sqrt(var / R);
  }
  return res;
}

}  // namespace

QmcResult qmc_integrate(unsigned dim, int ncomp, const QmcIntegrand& f, const QmcOptions& opt) {
  return integrate_impl(dim, ncomp, f, opt, opt.parallel);
}

QmcResult qmc_integrate_serial(unsigned dim, int ncomp, const QmcIntegrand& f, const QmcOptions& opt) {
  return integrate_impl(dim, ncomp, f, opt, false);
}

ChargeSampler::ChargeSampler(const ChargeConfig& c, int cells) : c_(c) {
  const RadialWindow w = c.theta0;
  tau_ = InverseCdf([w](double t) { return w.eval(t); }, w.lo(), w.hi(), cells);
  const Bump3 b = c.theta1;
  ball_ = InverseCdf([b](double r) { return r * r * b.eval_radial(r); }, 0.0, b.radius(), cells);
  const ShellBump3 s = c.sigma;
  radial_ = InverseCdf([s](double r) { return r * r * s.eval_radial(r); }, s.r_in(), s.r_out(), cells);
  cap_max_ = std::min(s.aperture(), M_PI);
  cap_ = InverseCdf([s](double th) { return std::sin(th) * s.eval_angular_polar(th); }, 0.0, cap_max_, cells);
  d_ = s.axis();
  orthonormal_frame(d_, e1_, e2_);
}

ChargeSample ChargeSampler::map(const double* u) const {
  ChargeSample out;
  double w_tau, w_ball, w_rad, w_cap;
  out.tau = tau_.sample(u[0], &w_tau);

  const double rho = ball_.sample(u[1], &w_ball);
  const double ct = 2.0 * u[2] - 1.0, st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
  const double ph = 2.0 * M_PI * u[3];
  out.x1 = {rho * st * std::cos(ph), rho * st * std::sin(ph), rho * ct};

  const double ry = radial_.sample(u[4], &w_rad);
  const double th = cap_.sample(u[5], &w_cap);
  const double ps = 2.0 * M_PI * u[6];
  const Vec3 e = std::cos(th) * d_ + std::sin(th) * (std::cos(ps) * e1_ + std::sin(ps) * e2_);
  out.y = ry * e;

  out.weight = w_tau * (4.0 * M_PI * w_ball) * w_rad * (2.0 * M_PI * w_cap);
  return out;
}

}  // namespace conelight
