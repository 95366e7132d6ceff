#include "conelight/norms.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <random>

namespace conelight {

MomentumField pointwise_field(std::string label, std::function<Amplitude(const LightlikeMomentum&)> f) {
  return {std::move(label), [f](const std::vector<LightlikeMomentum>& ps) {
            std::vector<Amplitude> out(ps.size());
            std::vector<std::exception_ptr> fail(ps.size());
            const int n = static_cast<int>(ps.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_count())
            for (int i = 0; i < n; ++i) {
              try {
                out[i] = f(ps[i]);
              } catch (...) {
                fail[i] = std::current_exception();
              }
            }
            for (const auto& e : fail)
              if (e) std::rethrow_exception(e);
            return out;
          }};
}

MomentumField power_law_field(double a) {
  return pointwise_field("power_law", [a](const LightlikeMomentum& p) {
    Vec3 e1, e2;
    orthonormal_frame(p.dir, e1, e2);
    Amplitude out;
    const double v = std::pow(p.mag, -a);
    for (int k = 0; k < 3; ++k) out.c[k + 1] = v * e1[k];
    return out;
  });
}

MomentumField transverse_field(const MomentumField& f) {
  return {f.label + "_perp", [g = f.eval](const std::vector<LightlikeMomentum>& ps) {
            std::vector<Amplitude> out = g(ps);
            for (size_t i = 0; i < ps.size(); ++i) out[i] = transverse_project(out[i], ps[i].dir);
            return out;
          }};
}

DirectionRule sphere_rule(int n_polar, int n_azimuth) {
  if (n_polar < 1 || n_azimuth < 1) throw DomainError("sphere_rule: orders must be positive");
  const GaussRule& g = gauss_legendre(n_polar);
  DirectionRule r;
  for (int i = 0; i < n_polar; ++i) {
    const double c = g.x[i], s = std::sqrt(1.0 - c * c);
    for (int j = 0; j < n_azimuth; ++j) {
      const double phi = 2.0 * M_PI * (j + 0.5) / n_azimuth;
      r.dirs.push_back({s * std::cos(phi), s * std::sin(phi), c});
      r.weights.push_back(g.w[i] * 2.0 * M_PI / n_azimuth);
    }
  }
  return r;
}

DirectionRule axial_rule(const Vec3& axis, int n_polar) {
  if (n_polar < 1) throw DomainError("axial_rule: order must be positive");
  const Vec3 d = normalized(axis);
  Vec3 e1, e2;
  orthonormal_frame(d, e1, e2);
  const GaussRule& g = gauss_legendre(n_polar);
  DirectionRule r;
  for (int i = 0; i < n_polar; ++i) {
    const double c = g.x[i], s = std::sqrt(1.0 - c * c);
    r.dirs.push_back(c * d + s * e1);
    r.weights.push_back(2.0 * M_PI * g.w[i]);
  }
  return r;
}

namespace {

// Uniform double in [0, 1) from the raw engine output, identical on every platform.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Vec3 rotate(const std::array<double, 4>& q, const Vec3& v) {
  const double w = q[0];
  const Vec3 u{q[1], q[2], q[3]};
  const Vec3 t = 2.0 * cross(u, v);
  return v + w * t + cross(u, t);
}

}  // namespace

std::vector<Vec3> generic_directions(int count, std::uint64_t seed, const Vec3& exclude_axis, double exclude_angle) {
  if (count < 1) throw DomainError("generic_directions: count must be positive");
  if (!(exclude_angle >= 0.0 && exclude_angle < M_PI / 2)) throw DomainError("generic_directions: bad exclusion");
  std::mt19937_64 rng(seed);
  // Uniform random rotation from three uniforms (Shoemake).
  const double u1 = unit(rng), u2 = 2.0 * M_PI * unit(rng), u3 = 2.0 * M_PI * unit(rng);
  const std::array<double, 4> q{std::sqrt(u1) * std::cos(u3), std::sqrt(1.0 - u1) * std::sin(u2),
                                std::sqrt(1.0 - u1) * std::cos(u2), std::sqrt(u1) * std::sin(u3)};
  const Vec3 ax = normalized(exclude_axis);
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  for (int total = count;; ++total) {
    std::vector<Vec3> out;
    for (int i = 0; i < total && static_cast<int>(out.size()) < count; ++i) {
      const double z = 1.0 - (2.0 * i + 1.0) / total, s = std::sqrt(1.0 - z * z);
      const Vec3 v = rotate(q, {s * std::cos(golden * i), s * std::sin(golden * i), z});
      if (std::abs(dot(v, ax)) > std::cos(exclude_angle)) continue;
      out.push_back(v);
    }
    if (static_cast<int>(out.size()) == count) return out;
  }
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::converged:
      return "converged";
    case Verdict::diverging:
      return "diverging";
    default:
      return "inconclusive";
  }
}

namespace {

struct Shell {
  double lo, hi;
  double value = 0.0, err = 0.0;
};

// \int_{lo}^{hi} dk k^2 / sqrt(iota + k^2) \int de |f(k e)|^2 for every shell, with one batch evaluation.
void integrate_shells(const MomentumField& f, int iota, std::vector<Shell>& shells, int order,
                      const DirectionRule& rule) {
  const GaussRule& g = gauss_legendre(order);
  std::vector<LightlikeMomentum> ps;
  std::vector<double> wt;
  std::vector<size_t> owner;
  for (size_t s = 0; s < shells.size(); ++s) {
    const double a = std::log(shells[s].lo), b = std::log(shells[s].hi);
    for (int i = 0; i < order; ++i) {
      const double k = std::exp(0.5 * (a + b) + 0.5 * (b - a) * g.x[i]);
      const double w = 0.5 * (b - a) * g.w[i] * k * k * k / std::sqrt(iota + k * k);
      for (size_t d = 0; d < rule.dirs.size(); ++d) {
        ps.emplace_back(k, rule.dirs[d]);
        wt.push_back(w * rule.weights[d]);
        owner.push_back(s);
      }
    }
  }
  const std::vector<Amplitude> amps = f.eval(ps);
  for (size_t i = 0; i < ps.size(); ++i) {
    const double m = amps[i].spatial_norm(), e = amps[i].err;
    shells[owner[i]].value += wt[i] * m * m;
    shells[owner[i]].err += wt[i] * (2.0 * m * e + e * e);
  }
}

// Splits [lo, hi] into log-panels no wider than a factor of two.
void add_panels(double lo, double hi, int min_panels, std::vector<Shell>& out) {
  const int n = std::max(min_panels, static_cast<int>(std::ceil(std::log(hi / lo) / std::log(2.0) - 1e-9)));
  for (int i = 0; i < n; ++i)
    out.push_back({lo * std::pow(hi / lo, static_cast<double>(i) / n), lo * std::pow(hi / lo, (i + 1.0) / n)});
}

Verdict classify(const std::vector<double>& partials, const NormOptions& o, double& last_change) {
  last_change = 0.0;
  const size_t n = partials.size();
  if (n < 2) return Verdict::inconclusive;
  const double top = partials.back();
  const double inc = partials[n - 1] - partials[n - 2];
  if (top == 0.0 || inc <= 1e-12 * top) return Verdict::converged;
  last_change = inc / top;
  if (static_cast<int>(n) - 1 >= o.min_halvings) {
    bool flat = true;
    for (size_t j = n - o.min_halvings + 1; j < n; ++j) {
      const double a = partials[j - 1] - partials[j - 2], b = partials[j] - partials[j - 1];
      if (b < (1.0 - o.flat_tol) * a) flat = false;
    }
    if (flat) return Verdict::diverging;
  }
  return last_change <= o.cauchy_tol ? Verdict::converged : Verdict::inconclusive;
}

// Exponent a of |f| ~ |p|^-a from increments that scale as point^(c - 2a).
std::optional<double> exponent_from(const std::vector<double>& points, const std::vector<double>& partials,
                                    double c) {
  std::vector<double> x, y;
  for (size_t j = 1; j < partials.size(); ++j) {
    const double inc = partials[j] - partials[j - 1];
    if (inc > 0.0) {
      x.push_back(std::log(points[j]));
      y.push_back(std::log(inc));
    }
  }
  if (x.size() < 2) return std::nullopt;
  return 0.5 * (c - fit_line(x, y).slope);
}

void check_ladder(const std::vector<double>& v, bool increasing, const char* what) {
  if (v.empty()) throw DomainError(std::string("iota_norm_partials: empty ") + what);
  for (size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0)) throw DomainError(std::string("iota_norm_partials: nonpositive ") + what);
    if (i > 0 && (increasing ? v[i] <= v[i - 1] : v[i] >= v[i - 1]))
      throw DomainError(std::string("iota_norm_partials: ") + what + " not strictly monotone");
  }
}

}  // namespace

NormReport iota_norm_partials(const MomentumField& f, int iota, const std::vector<double>& ir,
                              const std::vector<double>& uv, const NormOptions& o) {
  if (iota != 0 && iota != 1) throw DomainError("iota_norm_partials: iota must be 0 or 1");
  check_ladder(ir, false, "IR ladder");
  check_ladder(uv, true, "UV ladder");
  if (ir.front() >= uv.front()) throw DomainError("iota_norm_partials: IR ladder must lie below the UV ladder");

  // Core region first, then one or more panels per IR and per UV ladder step.
  std::vector<Shell> shells;
  add_panels(ir.front(), uv.front(), o.core_panels, shells);
  const size_t n_core = shells.size();
  std::vector<size_t> ir_end, uv_end;
  for (size_t i = 1; i < ir.size(); ++i) {
    add_panels(ir[i], ir[i - 1], 1, shells);
    ir_end.push_back(shells.size());
  }
  for (size_t i = 1; i < uv.size(); ++i) {
    add_panels(uv[i - 1], uv[i], 1, shells);
    uv_end.push_back(shells.size());
  }

  NormReport rep;
  rep.iota = iota;
  bool ok = true;
  try {
    integrate_shells(f, iota, shells, o.radial_order, o.directions);
  } catch (const QuadratureFailure&) {
    ok = false;
  }

  double core = 0.0, core_err = 0.0;
  for (size_t i = 0; i < n_core; ++i) {
    core += shells[i].value;
    core_err += shells[i].err;
  }
  std::vector<double> irp{core}, uvp{core};
  rep.partials.push_back({"IR", ir.front(), uv.front(), core, core_err, ok});
  double v = core, e = core_err;
  size_t next = n_core;
  for (size_t i = 0; i < ir_end.size(); ++i) {
    for (; next < ir_end[i]; ++next) {
      v += shells[next].value;
      e += shells[next].err;
    }
    irp.push_back(v);
    rep.partials.push_back({"IR", ir[i + 1], uv.front(), v, e, ok});
  }
  v = core;
  e = core_err;
  for (size_t i = 0; i < uv_end.size(); ++i) {
    for (; next < uv_end[i]; ++next) {
      v += shells[next].value;
      e += shells[next].err;
    }
    uvp.push_back(v);
    rep.partials.push_back({"UV", ir.front(), uv[i + 1], v, e, ok});
  }

  if (!ok) return rep;
  rep.ir_verdict = classify(irp, o, rep.ir_increment);
  rep.uv_verdict = classify(uvp, o, rep.uv_increment);
  if (rep.ir_verdict == Verdict::diverging || rep.uv_verdict == Verdict::diverging)
    rep.verdict = Verdict::diverging;
  else if (rep.ir_verdict == Verdict::converged && rep.uv_verdict == Verdict::converged)
    rep.verdict = Verdict::converged;
  // Increments over [eps / 2, eps] scale as eps^(2 + iota - 2a); over [L, 2L] as L^(2 - iota - 2a).
  rep.fitted_ir_exponent = exponent_from(ir, irp, 2.0 + iota);
  rep.fitted_uv_exponent = exponent_from(uv, uvp, 2.0 - iota);
  return rep;
}

DecayFit decay_fit(const MomentumField& f, double lambda_min, double lambda_max, const std::vector<Vec3>& dirs,
                   int points, double min_snr) {
  if (!(lambda_min > 0.0 && lambda_max > lambda_min)) throw DomainError("decay_fit: window must be positive and increasing");
  if (dirs.empty()) throw DomainError("decay_fit: no directions");
  if (points < 2) throw DomainError("decay_fit: need at least two points");
  DecayFit fit;
  fit.lambda_min = lambda_min;
  fit.lambda_max = lambda_max;
  fit.directions = dirs;
  std::vector<LightlikeMomentum> ps;
  for (int i = 0; i < points; ++i) {
    const double lam = lambda_min * std::pow(lambda_max / lambda_min, static_cast<double>(i) / (points - 1));
    fit.lambdas.push_back(lam);
    for (const Vec3& d : dirs) ps.emplace_back(lam, d);
  }
  const std::vector<Amplitude> amps = f.eval(ps);
  const size_t nd = dirs.size();
  std::vector<double> x, y;
  for (int i = 0; i < points; ++i) {
    double ss = 0.0, se = 0.0;
    for (size_t d = 0; d < nd; ++d) {
      const Amplitude& a = amps[i * nd + d];
      const double m = a.spatial_norm();
      ss += m * m;
      se += m * a.err;
    }
    const double rms = std::sqrt(ss / nd);
    const double err = rms > 0.0 ? se / nd / rms : 0.0;
    if (!(rms > min_snr * err) || rms == 0.0)
      throw NoiseFloorError("decay_fit: field below the noise floor at lambda = " + std::to_string(fit.lambdas[i]) +
                            "; increase samples");
    fit.rms.push_back(rms);
    fit.rms_err.push_back(err);
    x.push_back(std::log(fit.lambdas[i]));
    y.push_back(std::log(rms));
  }
  const LinearFit lf = fit_line(x, y);
  fit.slope = lf.slope;
  fit.intercept = lf.intercept;
  fit.residual = lf.rms_residual;
  for (size_t d = 0; d < nd; ++d) {
    std::vector<double> xd, yd;
    for (int i = 0; i < points; ++i) {
      const double m = amps[i * nd + d].spatial_norm();
      if (m > 0.0) {
        xd.push_back(x[i]);
        yd.push_back(std::log(m));
      }
    }
    fit.direction_slopes.push_back(xd.size() >= 2 ? fit_line(xd, yd).slope : std::numeric_limits<double>::quiet_NaN());
  }
  return fit;
}

IrProbe ir_divergence_probe(const MomentumField& f, const std::vector<double>& eps, const NormOptions& o) {
  if (eps.empty() || eps.front() >= 1.0) throw DomainError("ir_divergence_probe: ladder must start below 1");
  if (eps.back() < 1e-4) throw DomainError("ir_divergence_probe: ladder must stay at or above 1e-4");
  const NormReport rep = iota_norm_partials(f, 0, eps, {1.0}, o);
  IrProbe out;
  out.eps = eps;
  for (const Partial& p : rep.partials) {
    if (!p.ok) throw QuadratureFailure("ir_divergence_probe: quadrature failure", Amplitude{});
    out.partials.push_back(p.value);
    out.errs.push_back(p.err);
  }
  for (size_t j = 1; j < out.partials.size(); ++j) out.increments.push_back(out.partials[j] - out.partials[j - 1]);
  const auto& inc = out.increments;
  double log_ratio = 0.0;
  int n_ratio = 0;
  bool shrinking = !inc.empty(), flat = static_cast<int>(inc.size()) >= o.min_halvings;
  for (size_t j = 1; j < inc.size(); ++j) {
    if (inc[j] > 0.0 && inc[j - 1] > 0.0) {
      log_ratio += std::log(inc[j] / inc[j - 1]);
      ++n_ratio;
    }
    if (inc[j] > (1.0 - o.flat_tol) * inc[j - 1]) shrinking = false;
    if (j + o.min_halvings > inc.size() && inc[j] < (1.0 - o.flat_tol) * inc[j - 1]) flat = false;
  }
  out.growth = n_ratio > 0 ? std::exp(log_ratio / n_ratio) : 0.0;
  const double total = out.partials.back();
  if (total == 0.0 || (!inc.empty() && inc.back() <= 1e-12 * total))
    out.verdict = Verdict::converged;
  else if (flat)
    out.verdict = Verdict::diverging;
  else if (shrinking && inc.size() >= 2)
    out.verdict = Verdict::converged;
  return out;
}

}  // namespace conelight
