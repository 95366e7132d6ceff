#include "conelight/weyl.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include "conelight/wave.hpp"

namespace conelight {

namespace {

const cplx I{0.0, 1.0};

double eta(const std::array<double, 4>& a, const std::array<double, 4>& b) {
  return a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3];
}

cplx eta(const Amplitude& g, const Amplitude& f) {
  return std::conj(g.c[0]) * f.c[0] - std::conj(g.c[1]) * f.c[1] - std::conj(g.c[2]) * f.c[2] -
         std::conj(g.c[3]) * f.c[3];
}

cplx spatial_dot(const Amplitude& g, const Amplitude& f) {
  return std::conj(g.c[1]) * f.c[1] + std::conj(g.c[2]) * f.c[2] + std::conj(g.c[3]) * f.c[3];
}

double euclidean_norm(const FourVector& p) { return std::sqrt(p.t * p.t + dot(p.x, p.x)); }

double sinc(double x) { return std::abs(x) < 1e-4 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

void require_same_kind(const TestField& g, const TestField& f) {
  if (g.kind != f.kind) throw DomainError("pairing of " + g.label + " and " + f.label + ": field kinds differ");
}

// \int dk 2 pi k e^{i k D0} sinc(k Dr) B_g(sqrt2 k) B_f(sqrt2 k) on [0, kmax] with `panels` panels.
cplx bump_radial(const WaveBump& wg, const WaveBump& wf, double d0, double dr, double kmax, int panels, int order) {
  const GaussRule& g = gauss_legendre(order);
  const double h = kmax / panels;
  cplx s = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double c = (p + 0.5) * h;
    for (int i = 0; i < order; ++i) {
      const double k = c + 0.5 * h * g.x[i];
      const double b = wg.fourier(std::sqrt(2.0) * k) * wf.fourier(std::sqrt(2.0) * k);
      s += g.w[i] * 2.0 * M_PI * k * b * sinc(k * dr) * std::exp(I * (k * d0));
    }
  }
  return 0.5 * h * s;
}

ComplexPairing bump_dplus(const BumpTerm& g, const BumpTerm& f, const PairingOptions& o) {
  const double c = g.coeff * f.coeff * eta(g.pol, f.pol);
  if (c == 0.0) return {};
  const FourVector d = f.centre - g.centre;
  const double dr = norm(d.x);
  // Beyond this cut the larger bump's transform is below 1e-11 of its peak.
  const double kmax = o.cutoff / (std::sqrt(2.0) * std::max(g.radius, f.radius));
  const int panels = static_cast<int>(std::ceil(kmax * (std::abs(d.t) + dr) / M_PI)) + 8;
  const WaveBump& wg = wave_bump(g.radius);
  const WaveBump& wf = wave_bump(f.radius);
  const cplx fine = bump_radial(wg, wf, d.t, dr, kmax, panels, o.order);
  const cplx coarse = bump_radial(wg, wf, d.t, dr, kmax, (panels + 1) / 2, o.order);
  return {c * fine, std::abs(c) * (std::abs(fine - coarse) + 1e-14 * std::abs(fine))};
}

// \int d^3p w(|p|) pair(g~(p), f~(p)) by radial panels times a direction rule; the error adds the
// change from halving the panels to the propagated amplitude errors.
template <class Pair>
ComplexPairing momentum_integral(const TestField& g, const TestField& f, const PairingOptions& o,
                                 const std::function<double(double)>& weight, Pair pair) {
  const GaussRule& gr = gauss_legendre(o.order);
  struct Node {
    LightlikeMomentum p;
    double w_fine, w_coarse;
  };
  std::vector<Node> nodes;
  for (int level = 0; level < 2; ++level) {
    const int panels = level == 0 ? o.panels : std::max(1, o.panels / 2);
    const double h = o.p_max / panels;
    for (int p = 0; p < panels; ++p) {
      for (int i = 0; i < o.order; ++i) {
        const double k = (p + 0.5) * h + 0.5 * h * gr.x[i];
        const double w = 0.5 * h * gr.w[i] * k * k * weight(k);
        for (size_t d = 0; d < o.directions.dirs.size(); ++d) {
          const double wd = w * o.directions.weights[d];
          nodes.push_back({LightlikeMomentum(k, o.directions.dirs[d]), level == 0 ? wd : 0.0, level == 1 ? wd : 0.0});
        }
      }
    }
  }
  const int n = static_cast<int>(nodes.size());
  std::vector<cplx> val(n);
  std::vector<double> unc(n);
  std::vector<std::exception_ptr> fail(n);
#pragma omp parallel for schedule(dynamic, 16) num_threads(thread_count())
  for (int i = 0; i < n; ++i) {
    try {
      const Amplitude a = g.amplitude(nodes[i].p), b = f.amplitude(nodes[i].p);
      val[i] = pair(a, b);
      unc[i] = a.spatial_norm() * b.err + a.err * b.spatial_norm() + std::abs(a.c[0]) * b.err +
               a.err * std::abs(b.c[0]) + a.err * b.err;
    } catch (...) {
      fail[i] = std::current_exception();
    }
  }
  for (const auto& e : fail)
    if (e) std::rethrow_exception(e);
  cplx fine = 0.0, coarse = 0.0;
  double prop = 0.0;
  for (int i = 0; i < n; ++i) {
    fine += nodes[i].w_fine * val[i];
    coarse += nodes[i].w_coarse * val[i];
    prop += nodes[i].w_fine * unc[i];
  }
  return {fine, std::abs(fine - coarse) + prop};
}

bool same_point(const FourVector& a, const FourVector& b) {
  return a.t == b.t && a.x[0] == b.x[0] && a.x[1] == b.x[1] && a.x[2] == b.x[2];
}

}  // namespace

bool ball_in_cone(const FourVector& centre, double radius, const FourVector& apex, double margin) {
  const FourVector d = centre - apex;
  // Euclidean distance from an interior point to the cone x0 = |x| is (x0 - |x|) / sqrt(2).
  return (d.t - norm(d.x)) / std::sqrt(2.0) > radius + margin;
}

Amplitude TestField::amplitude(const LightlikeMomentum& p) const {
  if (custom) return custom(p);
  return amplitude_at(p.four());
}

Amplitude TestField::amplitude_at(const FourVector& p) const {
  if (custom) throw DomainError("TestField::amplitude_at: only bump sums have off-shell amplitudes");
  Amplitude out;
  const double k = euclidean_norm(p);
  for (const BumpTerm& b : bumps) {
    const cplx e = b.coeff * wave_bump(b.radius).fourier(k) * std::exp(I * minkowski_dot(p, b.centre));
    for (int m = 0; m < 4; ++m) out.c[m] += b.pol[m] * e;
  }
  return out;
}

TestField make_bump(std::string label, const FourVector& centre, double radius, const std::array<double, 4>& pol,
                    FieldKind kind) {
  if (!(radius > 0.0)) throw DomainError("make_bump: radius must be positive");
  if (kind == FieldKind::spatial && pol[0] != 0.0) throw DomainError("make_bump: spatial field with a time component");
  TestField f;
  f.label = std::move(label);
  f.kind = kind;
  f.bumps.push_back({1.0, centre, radius, pol});
  f.region = ball_in_cone(centre, radius, {}) ? RegionTag::forward_cone : RegionTag::generic;
  return f;
}

TestField in_shifted_cone(TestField f, const FourVector& t) {
  if (!f.is_bump_sum()) throw DomainError("in_shifted_cone: support of " + f.label + " is unknown");
  for (const BumpTerm& b : f.bumps)
    if (!ball_in_cone(b.centre, b.radius, t)) throw DomainError("in_shifted_cone: " + f.label + " leaves V+ + t");
  f.region = RegionTag::shifted_cone;
  f.apex = t;
  return f;
}

TestField scaled(const TestField& f, double c, std::string label) {
  TestField out = f;
  out.label = std::move(label);
  if (f.is_bump_sum()) {
    for (BumpTerm& b : out.bumps) b.coeff *= c;
  } else {
    out.custom = [g = f.custom, c](const LightlikeMomentum& p) {
      Amplitude a = g(p);
      for (auto& x : a.c) x *= c;
      a.err *= std::abs(c);
      return a;
    };
  }
  return out;
}

TestField sum(const TestField& a, const TestField& b, std::string label) {
  require_same_kind(a, b);
  TestField out;
  out.label = std::move(label);
  out.kind = a.kind;
  if (a.region == b.region && (a.region != RegionTag::shifted_cone || same_point(a.apex, b.apex))) {
    out.region = a.region;
    out.apex = a.apex;
  }
  if (a.is_bump_sum() && b.is_bump_sum()) {
    out.bumps = a.bumps;
    out.bumps.insert(out.bumps.end(), b.bumps.begin(), b.bumps.end());
  } else {
    out.custom = [a, b](const LightlikeMomentum& p) {
      Amplitude x = a.amplitude(p);
      x += b.amplitude(p);
      return x;
    };
  }
  return out;
}

TestField from_amplitude(std::string label, AmplitudeFn f, FieldKind kind) {
  TestField out;
  out.label = std::move(label);
  out.kind = kind;
  out.custom = std::move(f);
  return out;
}

ComplexPairing dplus(const TestField& g, const TestField& f, const PairingOptions& o) {
  require_same_kind(g, f);
  if (g.is_bump_sum() && f.is_bump_sum()) {
    ComplexPairing out;
    for (const BumpTerm& a : g.bumps) {
      for (const BumpTerm& b : f.bumps) {
        const ComplexPairing t = bump_dplus(a, b, o);
        out.value += t.value;
        out.err += t.err;
      }
    }
    return out;
  }
  // dmu = d^3p / (2 |p|).
  return momentum_integral(
      g, f, o, [](double k) { return 0.5 / k; }, [](const Amplitude& a, const Amplitude& b) { return eta(a, b); });
}

PairingValue symplectic(const TestField& g, const TestField& f, const PairingOptions& o) {
  const ComplexPairing d = dplus(g, f, o);
  return {-2.0 * d.value.imag(), 2.0 * d.err};
}

namespace {

// (1 / 2 pi) \int d^4x b_g(x) (K * b_f)(x) for unit coefficients, in coordinates centred on f.
double bump_position(const BumpTerm& g, const BumpTerm& f, int n) {
  const WaveBump& wf = wave_bump(f.radius);
  const FourVector d = g.centre - f.centre;
  const double a = g.radius, dr = norm(d.x);
  auto bump = [&](double tau, double s2) { return mollifier(std::sqrt(tau * tau + s2) / a); };
  const double v = integrate_composite(
      [&](double tau) {
        const double rho2 = a * a - tau * tau;
        if (rho2 <= 0.0) return 0.0;
        const double rho = std::sqrt(rho2), t = d.t + tau;
        if (dr < 1e-12) {
          return integrate_composite(
              [&](double R) { return 4.0 * M_PI * R * R * bump(tau, R * R) * wf.commutator(t, R); }, 0.0, rho, 4,
              n);
        }
        return integrate_composite(
            [&](double R) {
              if (R <= 0.0) return 0.0;
              const double kb = wf.commutator(t, R);
              if (kb == 0.0) return 0.0;
              const double c0 = std::clamp((R * R + dr * dr - rho2) / (2.0 * R * dr), -1.0, 1.0);
              const double ang = integrate_composite(
                  [&](double c) { return bump(tau, R * R + dr * dr - 2.0 * R * dr * c); }, c0, 1.0, 2, n);
              return 2.0 * M_PI * R * R * ang * kb;
            },
            std::max(0.0, dr - rho), dr + rho, 4, n);
      },
      -a, a, 4, n);
  return v / (2.0 * M_PI);
}

}  // namespace

PairingValue symplectic_position(const TestField& g, const TestField& f, int order) {
  require_same_kind(g, f);
  if (!g.is_bump_sum() || !f.is_bump_sum()) throw DomainError("symplectic_position: bump sums only");
  PairingValue out;
  const int coarse = std::max(4, 3 * order / 4);
  for (const BumpTerm& a : g.bumps) {
    for (const BumpTerm& b : f.bumps) {
      const double c = a.coeff * b.coeff * eta(a.pol, b.pol);
      if (c == 0.0) continue;
      const double fine = bump_position(a, b, order);
      out.value += c * fine;
      out.err += std::abs(c) * std::abs(fine - bump_position(a, b, coarse));
    }
  }
  return out;
}

ComplexPairing inner_product(const TestField& g, const TestField& f, int iota, const PairingOptions& o) {
  if (iota != 0 && iota != 1) throw DomainError("inner_product: iota must be 0 or 1");
  return momentum_integral(
      g, f, o, [iota](double k) { return 1.0 / std::sqrt(iota + k * k); },
      [](const Amplitude& a, const Amplitude& b) { return spatial_dot(a, b); });
}

void FieldRegistry::add(const TestField& f) {
  if (f.label.empty()) throw DomainError("FieldRegistry: empty label");
  fields_[f.label] = f;
}

const TestField& FieldRegistry::get(const std::string& label) const {
  const auto it = fields_.find(label);
  if (it == fields_.end()) throw DomainError("FieldRegistry: unknown field " + label);
  return it->second;
}

WeylWord weyl_generator(const std::string& label, double coeff) {
  WeylWord w;
  if (coeff != 0.0) w.coeffs[label] = coeff;
  return w;
}

WeylWord weyl_multiply(const WeylWord& a, const WeylWord& b, const FieldRegistry& reg, const PairingOptions& o) {
  double sigma = 0.0, err = 0.0;
  for (const auto& [la, ca] : a.coeffs) {
    for (const auto& [lb, cb] : b.coeffs) {
      const PairingValue s = symplectic(reg.get(la), reg.get(lb), o);
      sigma += ca * cb * s.value;
      err += std::abs(ca * cb) * s.err;
    }
  }
  WeylWord out;
  out.phase = a.phase * b.phase * std::exp(I * (0.5 * sigma));
  out.err = a.err + b.err + 0.5 * err;
  out.coeffs = a.coeffs;
  for (const auto& [lb, cb] : b.coeffs) {
    const double c = (out.coeffs.count(lb) ? out.coeffs[lb] : 0.0) + cb;
    if (c == 0.0)
      out.coeffs.erase(lb);
    else
      out.coeffs[lb] = c;
  }
  return out;
}

ComplexPairing vacuum_expectation(const WeylWord& w, const FieldRegistry& reg, const PairingOptions& o) {
  cplx q = 0.0;
  double err = 0.0;
  for (const auto& [la, ca] : w.coeffs) {
    for (const auto& [lb, cb] : w.coeffs) {
      const ComplexPairing d = dplus(reg.get(la), reg.get(lb), o);
      q += ca * cb * d.value;
      err += std::abs(ca * cb) * d.err;
    }
  }
  if (q.real() > 10.0 * err + 1e-14)
    throw DomainError("vacuum_expectation: <h, D+ h> has positive real part; the field is not physical");
  const cplx v = w.phase * std::exp(0.5 * q);
  return {v, std::abs(v) * 0.5 * err + w.err};
}

PairingValue automorphism_phase(const AmplitudeFn& m, const TestField& h, const PairingOptions& o) {
  return symplectic(from_amplitude("m", m, h.kind), h, o);
}

PairingValue current_phase(const AmplitudeFn& m, const TestField& f, const PairingOptions& o) {
  const TestField h = from_amplitude(
      f.label + "_current",
      [f](const LightlikeMomentum& p) {
        const Amplitude a = f.amplitude(p);
        const FourVector P = p.four();
        const cplx pf = P.t * a.c[0] - P.x[0] * a.c[1] - P.x[1] * a.c[2] - P.x[2] * a.c[3];
        Amplitude out;
        out.c = {P.t * pf, P.x[0] * pf, P.x[1] * pf, P.x[2] * pf};
        out.err = 2.0 * p.mag * p.mag * a.err;
        return out;
      },
      FieldKind::four_vector);
  return automorphism_phase(m, h, o);
}

std::vector<PairingValue> functional_difference(const PhaseFunctional& a, const PhaseFunctional& b,
                                                const std::vector<TestField>& probes, const FourVector& t) {
  for (const TestField& f : probes)
    if (f.region != RegionTag::shifted_cone || !same_point(f.apex, t))
      throw DomainError("functional_difference: probe " + f.label + " is not supported in V+ + t");
  std::vector<PairingValue> out;
  for (const TestField& f : probes) {
    const PairingValue x = a(f), y = b(f);
    out.push_back({x.value - y.value, x.err + y.err});
  }
  return out;
}

TestField laplace_probe(const TestField& f, double eps) {
  if (!(eps > 0.0)) throw DomainError("laplace_probe: eps must be positive");
  TestField out = from_amplitude(
      f.label + "_laplace",
      [f, eps](const LightlikeMomentum& p) {
        const Amplitude a = f.amplitude(p);
        const Vec3 v = p.vec();
        const cplx fac = 1.0 / ((p.mag - I * eps) * (p.mag - I * eps));
        const cplx pv = v[0] * a.c[1] + v[1] * a.c[2] + v[2] * a.c[3];
        const double k2 = dot(v, v);
        Amplitude out;
        for (int m = 0; m < 3; ++m) out.c[m + 1] = fac * (k2 * a.c[m + 1] - v[m] * pv);
        out.err = 2.0 * std::abs(fac) * k2 * a.err;
        return out;
      },
      FieldKind::spatial);
  out.region = f.region;
  out.apex = f.apex;
  return out;
}

TestField transverse_part(const TestField& f) {
  TestField out = from_amplitude(
      f.label + "_perp", [f](const LightlikeMomentum& p) { return transverse_project(f.amplitude(p), p.dir); },
      FieldKind::spatial);
  out.region = f.region;
  out.apex = f.apex;
  return out;
}

CocycleValue translation_cocycle(const AmplitudeFn& l, const FourVector& x, const CocycleOptions& o) {
  CocycleValue out;
  const auto& ir = o.ir_ladder;
  if (ir.empty()) throw DomainError("translation_cocycle: empty IR ladder");
  for (size_t i = 0; i < ir.size(); ++i)
    if (!(ir[i] > 0.0) || (i > 0 && ir[i] >= ir[i - 1]) || ir[i] >= o.p_max)
      throw DomainError("translation_cocycle: IR ladder must decrease from below p_max");
  const double span = std::abs(x.t) + norm(x.x);
  if (span == 0.0) {
    out.partials.assign(ir.size(), 0.0);
    return out;
  }

  // Radial panels: log-spaced (ratio <= 2) up to 1, then width <= min(1, pi / (2 span)) for the phase.
  struct Panel {
    double lo, hi;
    int shell;  // -1 for the core, else index of the IR step
  };
  std::vector<Panel> panels;
  auto add_log = [&](double lo, double hi, int shell) {
    const int n = std::max(1, static_cast<int>(std::ceil(std::log(hi / lo) / std::log(2.0) - 1e-9)));
    for (int i = 0; i < n; ++i)
      panels.push_back({lo * std::pow(hi / lo, double(i) / n), lo * std::pow(hi / lo, (i + 1.0) / n), shell});
  };
  const double knee = std::max(1.0, ir.front());
  if (ir.front() < knee) add_log(ir.front(), knee, -1);
  const double width = std::min(1.0, M_PI / (2.0 * span));
  const int nlin = static_cast<int>(std::ceil((o.p_max - knee) / width));
  for (int i = 0; i < nlin; ++i)
    panels.push_back({knee + (o.p_max - knee) * i / nlin, knee + (o.p_max - knee) * (i + 1.0) / nlin, -1});
  for (size_t i = 1; i < ir.size(); ++i) add_log(ir[i], ir[i - 1], static_cast<int>(i) - 1);

  const GaussRule& g = gauss_legendre(o.order);
  std::vector<LightlikeMomentum> ps;
  std::vector<double> w;
  std::vector<int> shell;
  for (const Panel& pn : panels) {
    for (int i = 0; i < o.order; ++i) {
      const double k = 0.5 * (pn.lo + pn.hi) + 0.5 * (pn.hi - pn.lo) * g.x[i];
      for (size_t d = 0; d < o.directions.dirs.size(); ++d) {
        ps.emplace_back(k, o.directions.dirs[d]);
        // d^3p / |p| = k dk de
        w.push_back(0.5 * (pn.hi - pn.lo) * g.w[i] * k * o.directions.weights[d]);
        shell.push_back(pn.shell);
      }
    }
  }
  const int n = static_cast<int>(ps.size());
  std::vector<double> val(n), unc(n);
  std::vector<std::exception_ptr> fail(n);
#pragma omp parallel for schedule(dynamic, 16) num_threads(thread_count())
  for (int i = 0; i < n; ++i) {
    try {
      const Amplitude a = l(ps[i]);
      const double m = a.spatial_norm(), s = std::sin(minkowski_dot(ps[i].four(), x));
      val[i] = -m * m * s;
      unc[i] = (2.0 * m * a.err + a.err * a.err) * std::abs(s);
    } catch (...) {
      fail[i] = std::current_exception();
    }
  }
  for (const auto& e : fail)
    if (e) std::rethrow_exception(e);
  std::vector<double> part(ir.size(), 0.0);
  double core = 0.0, err = 0.0;
  for (int i = 0; i < n; ++i) {
    if (shell[i] < 0)
      core += w[i] * val[i];
    else
      part[shell[i] + 1] += w[i] * val[i];
    err += w[i] * unc[i];
  }
  double acc = core;
  for (size_t i = 0; i < ir.size(); ++i) {
    acc += part[i];
    out.partials.push_back(acc);
  }
  out.value = out.partials.back();
  out.err = err;
  if (ir.size() > 1 && out.value != 0.0)
    out.ir_change = std::abs(out.partials.back() - out.partials[ir.size() - 2]) / std::abs(out.value);
  if (out.ir_change > o.stability)
    throw DomainError("translation_cocycle: partials not Cauchy along the IR ladder; the field may not be in L_1");
  return out;
}

}  // namespace conelight
