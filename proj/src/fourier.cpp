#include "conelight/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace conelight {

namespace {

using Raw4 = std::array<cplx, 4>;
constexpr cplx I{0.0, 1.0};

// Phase budget per panel; Gauss rules below resolve this to round-off.
constexpr double kPanelPhase = 2.0;
// Panels never exceed half the distance to the nearest complex singularity of the shell path.
constexpr double kPanelGeometry = 0.5;
constexpr double kMinStep = 1e-3;

double norm4(const Raw4& a) {
  double s = 0.0;
  for (const cplx& z : a) s += std::norm(z);
  return std::sqrt(s);
}

Raw4& operator+=(Raw4& a, const Raw4& b) {
  for (int k = 0; k < 4; ++k) a[k] += b[k];
  return a;
}

Raw4 diff4(const Raw4& a, const Raw4& b) {
  Raw4 r;
  for (int k = 0; k < 4; ++k) r[k] = a[k] - b[k];
  return r;
}

Raw4 scaled(const FourVector& v, cplx s) { return {s * v.t, s * v.x[0], s * v.x[1], s * v.x[2]}; }

// Path point with its phase p.z and phase rate p.z'.
struct Node {
  PathPoint pt;
  double phase = 0.0;
};

// Phase evaluator. For light-like p on a shell point (t, x) with t^2 - x^2 = tau^2 the
// difference t - n.x is formed without cancellation.
struct Phase {
  FourVector p;
  bool lightlike = false;
  double k = 0.0;
  Vec3 n{0.0, 0.0, 1.0};

  explicit Phase(const FourVector& p_) : p(p_) {
    const double pm = norm(p.x);
    if (pm > 0.0 && std::fabs(p.t - pm) <= 1e-14 * pm) {
      lightlike = true;
      k = p.t;
      n = (1.0 / pm) * p.x;
    }
  }

  double shell(const FourVector& z, double tau2) const {
    if (!lightlike) return minkowski_dot(p, z);
    const double nx = dot(n, z.x);
    const Vec3 perp = z.x - nx * n;
    const double num = tau2 + dot(perp, perp);
    if (z.t > 0.0) return nx > 0.0 ? k * num / (z.t + nx) : k * (z.t - nx);
    return nx < 0.0 ? -k * num / (-z.t - nx) : k * (z.t - nx);
  }

  double generic(const FourVector& z) const { return minkowski_dot(p, z); }

  double rate(const FourVector& v) const { return minkowski_dot(p, v); }
};

// Light-like asymptote data: beta = p.l and p.r, with beta free of cancellation.
double asymptote_beta(const Phase& ph, const AsymptoticData& d) {
  if (!ph.lightlike) return minkowski_dot(ph.p, d.l);
  const double ny = dot(ph.n, d.l.x), ly = d.l.t;
  if (ny > 0.0) {
    const Vec3 perp = d.l.x - ny * ph.n;
    return ph.k * dot(perp, perp) / (ly + ny);
  }
  return ph.k * (ly - ny);
}

template <class NodeFn>
std::vector<double> make_breaks(NodeFn&& node, const Phase& ph, double a, double b) {
  std::vector<double> br{a};
  double u = a;
  while (u < b) {
    const Node nd = node(u);
    const double vs = norm(nd.pt.v.x);
    double h = vs > 0.0 ? kPanelGeometry * std::fabs(nd.pt.z.t) / vs : b - a;
    const double rate = std::fabs(ph.rate(nd.pt.v));
    if (rate > 0.0) h = std::min(h, kPanelPhase / rate);
    h = std::max(h, kMinStep);
    u = (b - u < 1.25 * h) ? b : u + h;
    br.push_back(u);
  }
  return br;
}

template <class F>
Raw4 panel(F&& f, double a, double b, int n, double* abs_int = nullptr) {
  const GaussRule& g = gauss_legendre(n);
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  Raw4 s{};
  double m = 0.0;
  for (int i = 0; i < n; ++i) {
    const Raw4 v = f(c + h * g.x[i]);
    for (int k = 0; k < 4; ++k) s[k] += g.w[i] * v[k];
    if (abs_int) m += g.w[i] * norm4(v);
  }
  for (cplx& z : s) z *= h;
  if (abs_int) *abs_int = std::fabs(h) * m;
  return s;
}

template <class F>
Raw4 integrate_fixed(F&& f, const std::vector<double>& br, int n) {
  Raw4 s{};
  for (std::size_t i = 0; i + 1 < br.size(); ++i) s += panel(f, br[i], br[i + 1], n);
  return s;
}

struct Refinement {
  int max_depth = 40;
  long budget = 1 << 16;  // panel bisections allowed in one integral
  double err = 0.0;
  bool failed = false;
  double phase_scale = 1.0;  // largest |phase| seen; sets the rounding floor of the integrand
};

template <class F>
Raw4 refine(F&& f, double a, double b, const Raw4& whole, int depth, double tol, Refinement& st) {
  const double m = 0.5 * (a + b);
  double al = 0.0, ar = 0.0;
  const Raw4 l = panel(f, a, m, 16, &al), r = panel(f, m, b, 16, &ar);
  Raw4 both = l;
  both += r;
  const double e = norm4(diff4(both, whole));
  // Differences below the rounding level of the panel sums cannot be refined away.
  tol = std::max(tol, 64.0 * std::numeric_limits<double>::epsilon() * st.phase_scale * (al + ar));
  if (e <= tol || depth >= st.max_depth || --st.budget <= 0) {
    if (e > tol) st.failed = true;
    st.err += e;
    return both;
  }
  Raw4 out = refine(f, a, m, l, depth + 1, 0.5 * tol, st);
  out += refine(f, m, b, r, depth + 1, 0.5 * tol, st);
  return out;
}

template <class F>
Raw4 integrate_adaptive(F&& f, const std::vector<double>& br, const QuadratureConfig& q, Refinement& st) {
  std::vector<Raw4> first(br.size() - 1);
  Raw4 total{};
  for (std::size_t i = 0; i + 1 < br.size(); ++i) {
    first[i] = panel(f, br[i], br[i + 1], 16);
    total += first[i];
  }
  const double tol = std::max(q.abs_tol, q.rel_tol * norm4(total)) / static_cast<double>(first.size());
  st.max_depth = q.max_refine;
  Raw4 out{};
  for (std::size_t i = 0; i + 1 < br.size(); ++i) out += refine(f, br[i], br[i + 1], first[i], 0, tol, st);
  return out;
}

// Twice integrated-by-parts far tail from U to +inf (side = +1) or from -inf to U (side = -1).
Raw4 ibp_tail(const Node& nd, const Phase& ph, int side, double* err) {
  const double d1 = ph.rate(nd.pt.v), d2 = ph.rate(nd.pt.acc);
  const cplx e = std::exp(I * nd.phase);
  const double g[4] = {nd.pt.v.t, nd.pt.v.x[0], nd.pt.v.x[1], nd.pt.v.x[2]};
  const double gp[4] = {nd.pt.acc.t, nd.pt.acc.x[0], nd.pt.acc.x[1], nd.pt.acc.x[2]};
  Raw4 out;
  double h1n = 0.0;
  for (int k = 0; k < 4; ++k) {
    const cplx h1 = (gp[k] * d1 - g[k] * d2) / (I * d1 * d1);
    h1n = std::max(h1n, std::abs(h1));
    out[k] = static_cast<double>(side) * e / (I * d1) * (h1 - g[k]);
  }
  if (err) *err = 4.0 * h1n / (std::fabs(d1) * std::max(1.0, std::fabs(d1) * std::fabs(nd.pt.z.t) / norm(nd.pt.v.x)));
  return out;
}

// Cutoff beyond which the tail is handled by parts: about forty radians of asymptotic phase.
double tail_cutoff(double u0, double beta) {
  const double b = std::fabs(beta);
  double U = std::max({2.0 * std::fabs(u0), 4.0, b > 0.0 ? 40.0 / b : 1e12});
  return std::min(U, 1e12);
}

Amplitude to_amplitude(const Raw4& r, double err) {
  Amplitude a;
  for (int k = 0; k < 4; ++k) a.c[k] = kFourierPrefactor * r[k];
  a.err = kFourierPrefactor * err;
  return a;
}

template <class NodeFn>
auto integrand_of(NodeFn& node, Refinement* st = nullptr) {
  return [&node, st](double u) {
    const Node nd = node(u);
    if (st) st->phase_scale = std::max(st->phase_scale, std::fabs(nd.phase));
    return scaled(nd.pt.v, std::exp(I * nd.phase));
  };
}

// Shell or mirror branch with the cancellation-free phase.
struct BranchNode {
  const ShellPathParams& prm;
  const Phase& ph;
  bool mirror;
  Node operator()(double u) const {
    Node nd;
    nd.pt = mirror ? mirror_point(prm, u) : shell_point(prm, u);
    nd.phase = ph.shell(nd.pt.z, prm.tau * prm.tau);
    return nd;
  }
};

// Branch integral to infinity with fixed Gauss panels (used inside the smearing integrals).
Raw4 branch_tail_fixed(const ShellPathParams& prm, const Phase& ph, double beta, int side) {
  const BranchNode node{prm, ph, side < 0};
  const double U = tail_cutoff(1.0, beta);
  const double a = side > 0 ? 1.0 : -U, b = side > 0 ? U : -1.0;
  const std::vector<double> br = make_breaks(node, ph, a, b);
  auto f = integrand_of(node);
  Raw4 s = integrate_fixed(f, br, 12);
  s += ibp_tail(node(side > 0 ? U : -U), ph, side, nullptr);
  return s;
}

Raw4 interpolation_raw(const ShellPathParams& prm, const Phase& ph) {
  const FourVector hi = shell_path(prm, 1.0), lo = mirror_path(prm, -1.0);
  const FourVector v = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
  const double a = ph.generic(v);
  const double sinc2 = std::fabs(a) < 1e-4 ? 2.0 * (1.0 - a * a / 6.0) : 2.0 * std::sin(a) / a;
  return scaled(v, std::exp(I * ph.generic(mid)) * sinc2);
}

}  // namespace

LightlikeMomentum::LightlikeMomentum(double m, const Vec3& d) : mag(m), dir(d) {
  if (!(m > 0.0) || !std::isfinite(m)) throw DomainError("momentum magnitude must be positive and finite");
  if (std::fabs(norm(d) - 1.0) > 1e-12) throw DomainError("momentum direction must be a unit vector");
}

double Amplitude::spatial_norm() const { return std::sqrt(std::norm(c[1]) + std::norm(c[2]) + std::norm(c[3])); }

Amplitude& Amplitude::operator+=(const Amplitude& o) {
  for (int k = 0; k < 4; ++k) c[k] += o.c[k];
  err += o.err;
  return *this;
}

Amplitude operator-(const Amplitude& a, const Amplitude& b) {
  Amplitude r = a;
  for (int k = 0; k < 4; ++k) r.c[k] -= b.c[k];
  r.err = a.err + b.err;
  return r;
}

Amplitude operator*(cplx s, const Amplitude& a) {
  Amplitude r = a;
  for (cplx& z : r.c) z *= s;
  r.err = std::abs(s) * a.err;
  return r;
}

void QuadratureConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw DomainError("quadrature tolerances must be positive");
  if (qmc_samples < 1000) throw DomainError("qmc_samples must be at least 1000");
  if (replicates < 2) throw DomainError("at least two replicates are needed for an error bar");
  if (max_refine < 1) throw DomainError("max_refine must be positive");
}

QmcOptions QuadratureConfig::qmc() const {
  QmcOptions o;
  o.samples = qmc_samples;
  o.replicates = replicates;
  o.seed = seed;
  return o;
}

PathFunction shell_path_fn(const ShellPathParams& p) {
  return [p](double u) { return shell_point(p, u); };
}

PathFunction mirror_path_fn(const ShellPathParams& p) {
  return [p](double u) { return mirror_point(p, u); };
}

Amplitude path_amplitude(const PathFunction& path, double u0, double u1, const FourVector& p,
                         const QuadratureConfig& q) {
  q.validate();
  if (u0 == u1) return {};
  const double sign = u1 > u0 ? 1.0 : -1.0;
  const double a = std::min(u0, u1), b = std::max(u0, u1);
  const Phase ph(p);
  auto node = [&](double u) {
    Node nd;
    nd.pt = path(u);
    nd.phase = ph.generic(nd.pt.z);
    return nd;
  };
  const std::vector<double> br = make_breaks(node, ph, a, b);
  Refinement st;
  auto f = integrand_of(node, &st);
  Raw4 s = integrate_adaptive(f, br, q, st);
  for (cplx& z : s) z *= sign;
  const Amplitude out = to_amplitude(s, st.err);
  if (st.failed) throw QuadratureFailure("path_amplitude: refinement limit reached", out);
  return out;
}

Amplitude path_amplitude_tail(const PathFunction& path, double u0, int side, const FourVector& p,
                              const QuadratureConfig& q) {
  q.validate();
  if (side != 1 && side != -1) throw DomainError("path_amplitude_tail: side must be +1 or -1");
  const Phase ph(p);
  const PathPoint far = path(side * 1e9);
  const double beta = ph.rate(far.v);
  if (std::fabs(beta) <= 1e-13 * std::fabs(p.t) * std::fabs(far.v.t))
    throw DomainError("path_amplitude_tail: momentum is parallel to the asymptotic direction");
  auto node = [&](double u) {
    Node nd;
    nd.pt = path(u);
    nd.phase = ph.generic(nd.pt.z);
    return nd;
  };
  const double U = tail_cutoff(u0, beta);
  const double a = side > 0 ? u0 : -U, b = side > 0 ? U : u0;
  const std::vector<double> br = make_breaks(node, ph, a, b);
  Refinement st;
  auto f = integrand_of(node, &st);
  Raw4 s = integrate_adaptive(f, br, q, st);
  double terr = 0.0;
  s += ibp_tail(node(side > 0 ? U : -U), ph, side, &terr);
  const Amplitude out = to_amplitude(s, st.err + terr);
  if (st.failed) throw QuadratureFailure("path_amplitude_tail: refinement limit reached", out);
  return out;
}

Amplitude shell_branch_remainder(const ShellPathParams& prm, const FourVector& p, const QuadratureConfig& q) {
  q.validate();
  const Phase ph(p);
  const AsymptoticData d = asymptotic_data(prm);
  const double beta = asymptote_beta(ph, d);
  if (!(std::fabs(beta) > 0.0)) throw DomainError("shell_branch_remainder: p.l = 0");
  const double pr = ph.generic(d.r);
  const BranchNode node{prm, ph, false};
  const double ny = norm(prm.y), c2 = 2.0 * ny * d.a.t;
  // z - (u l + r) and z' - l only have time components; both are formed without cancellation:
  // z0 - u|y| - r0 = 2|y| a0 / (z0 + u|y| + r0) and z0' - |y| = -|y|^2 (tau^2 + |x_perp|^2) / (z0 (x.y + |y| z0)).
  auto f = [&](double u) {
    const Node nd = node(u);
    const Vec3 x = prm.x1 + u * prm.y;
    const double xy = dot(x, prm.y), w0 = nd.pt.z.t;
    const double dz = c2 / (w0 + u * ny + d.r.t);
    const Vec3 xp = x - (xy / (ny * ny)) * prm.y;
    const double dv = -ny * ny * (prm.tau * prm.tau + dot(xp, xp)) / (w0 * (xy + ny * w0));
    const double dphase = ph.lightlike ? ph.k * dz : minkowski_dot(ph.p, FourVector{dz, {0.0, 0.0, 0.0}});
    const cplx e_inf = std::exp(I * (beta * u + pr));
    // e^{i psi} - e^{i psi_inf} = e^{i psi_inf} 2i sin(dphase/2) e^{i dphase/2}
    const cplx jump = e_inf * 2.0 * I * std::sin(0.5 * dphase) * std::exp(0.5 * I * dphase);
    Raw4 out = scaled(d.l, jump);
    out[0] += dv * std::exp(I * nd.phase);
    return out;
  };
  const double U = tail_cutoff(1.0, beta);
  const std::vector<double> br = make_breaks(node, ph, 1.0, U);
  Refinement st;
  Raw4 s = integrate_adaptive(f, br, q, st);
  double terr = 0.0;
  s += ibp_tail(node(U), ph, 1, &terr);
  // Exact tail of the asymptote, \int_U^inf l e^{i(beta u + p.r)} du in the Abel sense.
  s = diff4(s, scaled(d.l, I * std::exp(I * (beta * U + pr)) / beta));
  const Amplitude out = to_amplitude(s, st.err + terr);
  if (st.failed) throw QuadratureFailure("shell_branch_remainder: refinement limit reached", out);
  return out;
}

Amplitude interpolation_amplitude(const ShellPathParams& prm, const FourVector& p) {
  return to_amplitude(interpolation_raw(prm, Phase(p)), 0.0);
}

Amplitude merged_path_amplitude(const ShellPathParams& prm, const FourVector& p, const QuadratureConfig& q) {
  q.validate();
  const Phase ph(p);
  const double beta = asymptote_beta(ph, asymptotic_data(prm));
  if (!(std::fabs(beta) > 0.0)) throw DomainError("merged_path_amplitude: p.l = 0");
  Amplitude total = interpolation_amplitude(prm, p);
  for (int side : {1, -1}) {
    const BranchNode node{prm, ph, side < 0};
    const double U = tail_cutoff(1.0, beta);
    const std::vector<double> br = side > 0 ? make_breaks(node, ph, 1.0, U) : make_breaks(node, ph, -U, -1.0);
    Refinement st;
    auto f = integrand_of(node, &st);
    Raw4 s = integrate_adaptive(f, br, q, st);
    double terr = 0.0;
    s += ibp_tail(node(side * U), ph, side, &terr);
    const Amplitude part = to_amplitude(s, st.err + terr);
    if (st.failed) throw QuadratureFailure("merged_path_amplitude: refinement limit reached", part);
    total += part;
  }
  return total;
}

Amplitude transverse_project(const Amplitude& a, const Vec3& n) {
  Amplitude r = a;
  const cplx nv = n[0] * a.c[1] + n[1] * a.c[2] + n[2] * a.c[3];
  r.c[0] = 0.0;
  for (int k = 0; k < 3; ++k) r.c[k + 1] = a.c[k + 1] - n[k] * nv;
  return r;
}

Amplitude grad_inv_laplacian(const ScalarAmplitude& rho, const LightlikeMomentum& p) {
  if (!(p.mag > 0.0)) throw DomainError("grad_inv_laplacian: |p| = 0 is the infrared singularity");
  Amplitude r;
  const Vec3 pv = p.vec();
  const double p2 = dot(pv, pv);
  for (int k = 0; k < 3; ++k) r.c[k + 1] = -I * (pv[k] / p2) * rho.value;
  r.err = rho.err / p.mag;
  return r;
}

Vec3 coulomb_direct(const ChargeConfig& c, const Vec3& x, int ball_order, int u_order) {
  const double r = c.theta1.radius();
  const double R = c.sigma.r_in(), Rb = c.sigma.r_out();
  std::vector<double> rx, rw, cx, cw, ux, uw;
  composite_nodes(0.0, r, 2, std::max(ball_order / 2, 2), rx, rw);
  composite_nodes(-1.0, 1.0, 2, std::max(ball_order / 2, 2), cx, cw);
  composite_nodes(R, Rb, std::max(u_order / 8, 1), 8, ux, uw);
  const int nphi = 2 * ball_order;
  Vec3 sum{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double wr = rw[i] * rx[i] * rx[i] * c.theta1.eval_radial(rx[i]);
    if (wr == 0.0) continue;
    for (std::size_t j = 0; j < cx.size(); ++j) {
      const double st = std::sqrt(std::max(0.0, 1.0 - cx[j] * cx[j]));
      for (int k = 0; k < nphi; ++k) {
        const double ph = 2.0 * M_PI * (k + 0.5) / nphi;
        const Vec3 z{rx[i] * st * std::cos(ph), rx[i] * st * std::sin(ph), rx[i] * cx[j]};
        const Vec3 w = x - z;
        const double wn = norm(w);
        if (wn == 0.0) continue;
        // With rho = |w| / u the path integral becomes a radial integral over the support of sigma.
        double acc = 0.0;
        const Vec3 wh = (1.0 / wn) * w;
        for (std::size_t m = 0; m < ux.size(); ++m) acc += uw[m] * ux[m] * ux[m] * c.sigma.eval(ux[m] * wh);
        acc /= wn * wn * wn;
        sum = sum + (wr * cw[j] * (2.0 * M_PI / nphi) * acc) * w;
      }
    }
  }
  return sum;
}

Vec3 rho_n(const ChargeConfig& c, const Vec3& n, const Vec3& x, int ball_order, int u_order) {
  if (!separation_ok(c)) throw DomainError("rho_n: configuration violates the separation condition");
  const Vec3 e = coulomb_direct(c, x, ball_order, u_order);
  return e - dot(n, e) * n;
}

namespace {

Amplitude from_qmc(const QmcResult& r, int offset = 0) {
  Amplitude a;
  double e2 = 0.0;
  for (int k = 0; k < 4; ++k) {
    a.c[k] = kFourierPrefactor * cplx(r.value[offset + 2 * k], r.value[offset + 2 * k + 1]);
    e2 += r.err[offset + 2 * k] * r.err[offset + 2 * k] + r.err[offset + 2 * k + 1] * r.err[offset + 2 * k + 1];
  }
  a.err = kFourierPrefactor * std::sqrt(e2);
  return a;
}

void store(const Raw4& s, double w, double* out) {
  for (int k = 0; k < 4; ++k) {
    out[2 * k] = w * s[k].real();
    out[2 * k + 1] = w * s[k].imag();
  }
}

// Merged-path amplitude without prefactor for the smearing integrals; never throws.
Raw4 merged_raw(const ShellPathParams& prm, const Phase& ph) {
  const double beta = std::max(asymptote_beta(ph, asymptotic_data(prm)), 1e-300);
  Raw4 s = interpolation_raw(prm, ph);
  s += branch_tail_fixed(prm, ph, beta, 1);
  s += branch_tail_fixed(prm, ph, beta, -1);
  return s;
}

}  // namespace

Amplitude amp_m_s(const ChargeConfig& c, double s, const LightlikeMomentum& p, const QuadratureConfig& q) {
  q.validate();
  if (s < 1.0) throw DomainError("amp_m_s: s must be >= 1");
  const ChargeSampler smp(c);
  const Phase ph(p.four());
  const QmcResult r = qmc_integrate(
      ChargeSampler::kDim, 8,
      [&](const double* u, double* out) {
        const ChargeSample cs = smp.map(u);
        const ShellPathParams prm{cs.tau, cs.x1, cs.y};
        const BranchNode node{prm, ph, false};
        const std::vector<double> br = make_breaks(node, ph, 0.0, s);
        auto f = integrand_of(node);
        store(integrate_fixed(f, br, 12), cs.weight, out);
      },
      q.qmc());
  return from_qmc(r);
}

std::vector<Amplitude> amp_m_reg_batch(const ChargeConfig& c, const std::vector<LightlikeMomentum>& ps,
                                       const QuadratureConfig& q) {
  q.validate();
  if (!separation_ok(c)) throw DomainError("amp_m_reg: configuration violates the separation condition");
  const ChargeSampler smp(c);
  std::vector<Phase> phases;
  for (const auto& p : ps) phases.emplace_back(p.four());
  const int np = static_cast<int>(ps.size());
  const QmcResult r = qmc_integrate(
      ChargeSampler::kDim, 8 * np,
      [&](const double* u, double* out) {
        const ChargeSample cs = smp.map(u);
        const ShellPathParams prm{cs.tau, cs.x1, cs.y};
        for (int j = 0; j < np; ++j) store(merged_raw(prm, phases[j]), cs.weight, out + 8 * j);
      },
      q.qmc());
  std::vector<Amplitude> out;
  for (int j = 0; j < np; ++j) out.push_back(from_qmc(r, 8 * j));
  return out;
}

Amplitude amp_m_reg(const ChargeConfig& c, const LightlikeMomentum& p, const QuadratureConfig& q) {
  return amp_m_reg_batch(c, {p}, q).front();
}

Amplitude amp_m_interp(const ChargeConfig& c, const FourVector& p, const QuadratureConfig& q) {
  q.validate();
  const ChargeSampler smp(c);
  const Phase ph(p);
  const QmcResult r = qmc_integrate(
      ChargeSampler::kDim, 8,
      [&](const double* u, double* out) {
        const ChargeSample cs = smp.map(u);
        store(interpolation_raw({cs.tau, cs.x1, cs.y}, ph), cs.weight, out);
      },
      q.qmc());
  return from_qmc(r);
}

ScalarAmplitude amp_rho_s(const ChargeConfig& c, double s, const FourVector& p, const QuadratureConfig& q) {
  q.validate();
  if (s < 1.0) throw DomainError("amp_rho_s: s must be >= 1");
  const ChargeSampler smp(c);
  const Phase ph(p);
  const QmcResult r = qmc_integrate(
      ChargeSampler::kDim, 2,
      [&](const double* u, double* out) {
        const ChargeSample cs = smp.map(u);
        const Vec3 X = cs.x1 + s * cs.y;
        const FourVector z = xi({cs.tau, X});
        const cplx e = cs.weight * std::exp(I * ph.shell(z, cs.tau * cs.tau));
        out[0] = e.real();
        out[1] = e.imag();
      },
      q.qmc());
  ScalarAmplitude a;
  a.value = kFourierPrefactor * cplx(r.value[0], r.value[1]);
  a.err = kFourierPrefactor * std::hypot(r.err[0], r.err[1]);
  return a;
}

cplx amp_rho_0(const ChargeConfig& c, double k) {
  if (!(k >= 0.0)) throw DomainError("amp_rho_0: k must be nonnegative");
  const RadialWindow& w = c.theta0;
  const double r = c.theta1.radius();
  // The angular integral of exp(-i k rho cos) is 2 sin(k rho) / (k rho).
  const int pt = std::max(4, static_cast<int>(std::ceil(k * (w.hi() - w.lo()))));
  const int pr = std::max(4, static_cast<int>(std::ceil(k * r)));
  std::vector<double> tx, tw, rx, rw;
  composite_nodes(w.lo(), w.hi(), pt, 16, tx, tw);
  composite_nodes(0.0, r, pr, 16, rx, rw);
  cplx sum = 0.0;
  for (std::size_t i = 0; i < tx.size(); ++i) {
    const double th0 = w.eval(tx[i]);
    if (th0 == 0.0) continue;
    cplx inner = 0.0;
    for (std::size_t j = 0; j < rx.size(); ++j) {
      const double kr = k * rx[j];
      const double sinc = kr < 1e-8 ? 1.0 : std::sin(kr) / kr;
      inner += rw[j] * rx[j] * rx[j] * c.theta1.eval_radial(rx[j]) * sinc *
               std::exp(I * (k * std::hypot(tx[i], rx[j])));
    }
    sum += tw[i] * th0 * inner;
  }
  return kFourierPrefactor * 4.0 * M_PI * sum;
}

OracleResult oracle_quadrature(const std::function<void(const double* x, double* out)>& f,
                               const std::vector<std::pair<double, double>>& box, int ncomp, std::uint64_t samples,
                               std::uint64_t seed, int replicates) {
  double vol = 1.0;
  for (const auto& [lo, hi] : box) {
    if (!(hi > lo)) throw DomainError("oracle_quadrature: empty box");
    vol *= hi - lo;
  }
  const unsigned dim = static_cast<unsigned>(box.size());
  if (dim == 0 || dim > 32) throw DomainError("oracle_quadrature: dimension must be in 1..32");
  QmcOptions o;
  o.samples = samples;
  o.seed = seed;
  o.replicates = replicates;
  const QmcResult r = qmc_integrate(
      dim, ncomp,
      [&](const double* u, double* out) {
        double x[32];
        for (unsigned d = 0; d < dim; ++d) x[d] = box[d].first + u[d] * (box[d].second - box[d].first);
        f(x, out);
      },
      o);
  OracleResult res;
  for (int k = 0; k < ncomp; ++k) {
    res.value.push_back(vol * r.value[k]);
    res.err.push_back(vol * r.err[k]);
  }
  return res;
}

}  // namespace conelight
