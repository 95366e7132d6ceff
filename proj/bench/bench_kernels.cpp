#include <benchmark/benchmark.h>

#include "conelight/bridge.hpp"
#include "conelight/phases.hpp"
#include "conelight/qmc.hpp"

using namespace conelight;

namespace {

// Smeared rho_s phase integrand: cheap per sample, so the sampling loop dominates.
QmcIntegrand rho_integrand(const ChargeSampler& smp, const FourVector& p) {
  return [&smp, p](const double* u, double* out) {
    const ChargeSample cs = smp.map(u);
    const FourVector z = xi({cs.tau, cs.x1 + 4.0 * cs.y});
    const double ph = minkowski_dot(p, z);
    out[0] = cs.weight * std::cos(ph);
    out[1] = cs.weight * std::sin(ph);
  };
}

QmcOptions options(std::int64_t samples) {
  QuadratureConfig q;
  q.qmc_samples = static_cast<std::uint64_t>(samples);
  return q.qmc();
}

void BM_QmcParallel(benchmark::State& st) {
  const ChargeSampler smp(default_config());
  const QmcIntegrand f = rho_integrand(smp, LightlikeMomentum(3.0, {0.0, 0.6, 0.8}).four());
  for (auto _ : st) benchmark::DoNotOptimize(qmc_integrate(ChargeSampler::kDim, 2, f, options(st.range(0))));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_QmcSerial(benchmark::State& st) {
  const ChargeSampler smp(default_config());
  const QmcIntegrand f = rho_integrand(smp, LightlikeMomentum(3.0, {0.0, 0.6, 0.8}).four());
  for (auto _ : st) benchmark::DoNotOptimize(qmc_integrate_serial(ChargeSampler::kDim, 2, f, options(st.range(0))));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_AmpMReg(benchmark::State& st) {
  const ChargeConfig c = default_config();
  QuadratureConfig q;
  q.qmc_samples = 1 << 10;
  const std::vector<LightlikeMomentum> ps{LightlikeMomentum(0.5, {0.0, 1.0, 0.0})};
  for (auto _ : st) benchmark::DoNotOptimize(amp_m_reg_batch(c, ps, q));
}

void BM_MInfinityAmplitude(benchmark::State& st) {
  const ChargeConfig c = default_config();
  const MInfinity& m = m_infinity_engine(c);
  const Vec3 n = normalized({0.3, 0.8, 0.2});
  m.amplitude(LightlikeMomentum(1.0, n));  // builds the profile for n once
  double k = 10.0;
  for (auto _ : st) {
    benchmark::DoNotOptimize(m.amplitude(LightlikeMomentum(k, n)));
    k = k < 300.0 ? k * 1.1 : 10.0;
  }
}

void BM_PhaseMs(benchmark::State& st) {
  const ChargeConfig c = default_config();
  const TestField f = make_bump("f", {30.0, {20.0, 0.0, 0.0}}, 0.5, {0, 1, 0, 0}, FieldKind::spatial);
  PathPhaseOptions o;
  o.q.qmc_samples = 1 << 10;
  for (auto _ : st) benchmark::DoNotOptimize(phase_m_s(c, 4.0, f, o));
}

}  // namespace

BENCHMARK(BM_QmcParallel)->Arg(1 << 12)->Arg(1 << 16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_QmcSerial)->Arg(1 << 12)->Arg(1 << 16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AmpMReg)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MInfinityAmplitude)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_PhaseMs)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
