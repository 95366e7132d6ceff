#include "conelight/phases.hpp"

#include <algorithm>
#include <cmath>

#include "conelight/qmc.hpp"
#include "conelight/wave.hpp"

namespace conelight {

namespace {

void require_bumps(const TestField& f, const char* who) {
  if (!f.is_bump_sum()) throw DomainError(std::string(who) + ": probe " + f.label + " must be a bump sum");
}

void require_in_cone(const TestField& f, const char* who) {
  for (const BumpTerm& b : f.bumps)
    if (!ball_in_cone(b.centre, b.radius, {}))
      throw DomainError(std::string(who) + ": probe " + f.label + " is not supported in V+");
}

// \int_{u0}^{u1} du z'(u) . eta . pol K_b(z(u) - centre), skipping stretches away from the
// null cone of the bump. `speed` bounds |d(t +- R)/du| along the path.
double path_term(const PathFunction& path, double u0, double u1, double speed, const BumpTerm& b,
                 const WaveBump& w, const PathPhaseOptions& o) {
  const double L = w.null_extent(), h = o.panel * L / speed;
  const GaussRule& g = gauss_legendre(o.order);
  double sum = 0.0, u = u0;
  while (u < u1) {
    const FourVector z = path(u).z - b.centre;
    const double R = norm(z.x);
    const double d = std::min(std::abs(z.t + R), std::abs(z.t - R)) - L;
    if (d > 1e-3 * L) {
      u += d / speed;
      continue;
    }
    const double hi = std::min(u1, u + h), mid = 0.5 * (u + hi), half = 0.5 * (hi - u);
    double panel = 0.0;
    for (int i = 0; i < o.order; ++i) {
      const PathPoint p = path(mid + half * g.x[i]);
      const FourVector r = p.z - b.centre;
      const double kb = w.commutator(r.t, norm(r.x));
      if (kb == 0.0) continue;
      const double contract =
          p.v.t * b.pol[0] - p.v.x[0] * b.pol[1] - p.v.x[1] * b.pol[2] - p.v.x[2] * b.pol[3];
      panel += g.w[i] * contract * kb;
    }
    sum += half * panel;
    u = hi;
  }
  return sum;
}

struct PathPiece {
  PathFunction path;
  double u0, u1, speed;
};

using PieceMaker = std::function<std::vector<PathPiece>(const ShellPathParams&)>;

PairingValue path_phase(const ChargeConfig& c, const TestField& f, const PieceMaker& pieces,
                        const PathPhaseOptions& o) {
  o.q.validate();
  const ChargeSampler smp(c);
  std::vector<const WaveBump*> waves;
  for (const BumpTerm& b : f.bumps) waves.push_back(&wave_bump(b.radius));
  const QmcResult r = qmc_integrate(
      ChargeSampler::kDim, 1,
      [&](const double* u, double* out) {
        const ChargeSample cs = smp.map(u);
        double acc = 0.0;
        for (const PathPiece& pc : pieces({cs.tau, cs.x1, cs.y}))
          for (std::size_t j = 0; j < f.bumps.size(); ++j)
            acc += f.bumps[j].coeff * path_term(pc.path, pc.u0, pc.u1, pc.speed, f.bumps[j], *waves[j], o);
        out[0] = cs.weight * acc;
      },
      o.q.qmc());
  return {r.value[0] / (2.0 * M_PI), r.err[0] / (2.0 * M_PI)};
}

PathPiece shell_piece(const ShellPathParams& p, double u0, double u1) {
  // |dt/du| and |dR/du| are both at most |y| on the shell.
  return {shell_path_fn(p), u0, u1, 2.0 * norm(p.y)};
}

}  // namespace

double constancy_threshold(const ChargeConfig& c, const TestField& f) {
  require_bumps(f, "constancy_threshold");
  require_in_cone(f, "constancy_threshold");
  const double t2 = c.theta0.hi(), r = c.theta1.radius(), R = c.sigma.r_in();
  double rho = 0.0;
  for (const BumpTerm& b : f.bumps) {
    const double cx = norm(b.centre.x);
    // x0 - b0 < |x - b|: sqrt(t2^2 + rho^2) - rho < delta with delta = c0 - |c| - sqrt2 a.
    const double delta = b.centre.t - cx - std::sqrt(2.0) * b.radius;
    rho = std::max(rho, (t2 * t2 - delta * delta) / (2.0 * delta));
    // b0 - x0 < |x - b| once rho exceeds (c0 + a + |c| + a) / 2.
    rho = std::max(rho, 0.5 * (b.centre.t + cx + 2.0 * b.radius));
  }
  return std::max(1.0, (rho * (1.0 + 1e-9) + 1e-9 + r) / R);
}

double phase_path(const PathFunction& path, double u0, double u1, double speed, const TestField& f,
                  const PathPhaseOptions& o) {
  require_bumps(f, "phase_path");
  if (!(speed > 0.0)) throw DomainError("phase_path: speed bound must be positive");
  double acc = 0.0;
  for (const BumpTerm& b : f.bumps) acc += b.coeff * path_term(path, u0, u1, speed, b, wave_bump(b.radius), o);
  return acc / (2.0 * M_PI);
}

PairingValue phase_m_s(const ChargeConfig& c, double s, const TestField& f, const PathPhaseOptions& o) {
  require_bumps(f, "phase_m_s");
  if (s < 1.0) throw DomainError("phase_m_s: s must be >= 1");
  return path_phase(c, f, [s](const ShellPathParams& p) { return std::vector<PathPiece>{shell_piece(p, 0.0, s)}; },
                    o);
}

PairingValue phase_m_infinity(const ChargeConfig& c, const TestField& f, const PathPhaseOptions& o) {
  return phase_m_s(c, constancy_threshold(c, f), f, o);
}

PairingValue phase_m_reg(const ChargeConfig& c, const TestField& f, const PathPhaseOptions& o) {
  const double s = constancy_threshold(c, f);
  return path_phase(
      c, f,
      [s](const ShellPathParams& p) {
        const FourVector v = merged_velocity(p, 0.0);
        PathFunction seg = [p, v](double u) { return PathPoint{merged_path(p, u), v, {}}; };
        return std::vector<PathPiece>{{seg, -1.0, 1.0, std::abs(v.t) + norm(v.x)}, shell_piece(p, 1.0, s)};
      },
      o);
}

PairingValue phase_grad_rho(const ChargeConfig& c, double s, const TestField& f, const PathPhaseOptions& o) {
  require_bumps(f, "phase_grad_rho");
  if (s != 0.0 && s < 1.0) throw DomainError("phase_grad_rho: s must be 0 or >= 1");
  o.q.validate();
  const ChargeSampler smp(c);
  std::vector<const WaveBump*> waves;
  for (const BumpTerm& b : f.bumps) waves.push_back(&wave_bump(b.radius));
  const QmcResult r = qmc_integrate(
      ChargeSampler::kDim, 1,
      [&](const double* u, double* out) {
        const ChargeSample cs = smp.map(u);
        const FourVector z = xi({cs.tau, cs.x1 + s * cs.y});
        double acc = 0.0;
        for (std::size_t j = 0; j < f.bumps.size(); ++j) {
          const BumpTerm& b = f.bumps[j];
          const FourVector d = z - b.centre;
          const double R = norm(d.x);
          if (R == 0.0) continue;
          const double e = waves[j]->enclosed(d.t, R);
          if (e == 0.0) continue;
          acc += b.coeff * (b.pol[1] * d.x[0] + b.pol[2] * d.x[1] + b.pol[3] * d.x[2]) / R * e;
        }
        out[0] = cs.weight * acc;
      },
      o.q.qmc());
  return {r.value[0] / (2.0 * M_PI), r.err[0] / (2.0 * M_PI)};
}

}  // namespace conelight
