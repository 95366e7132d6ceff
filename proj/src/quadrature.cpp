#include "conelight/quadrature.hpp"

#include <gsl/gsl_fit.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_linalg.h>
#include <gsl/gsl_vector.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace conelight {

const GaussRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return *it->second;
  auto rule = std::make_unique<GaussRule>();
  gsl_integration_glfixed_table* t = gsl_integration_glfixed_table_alloc(static_cast<size_t>(n));
  rule->x.resize(n);
  rule->w.resize(n);
  for (int i = 0; i < n; ++i) gsl_integration_glfixed_point(-1.0, 1.0, i, &rule->x[i], &rule->w[i], t);
  gsl_integration_glfixed_table_free(t);
  return *cache.emplace(n, std::move(rule)).first->second;
}

void composite_nodes(double a, double b, int panels, int n, std::vector<double>& x, std::vector<double>& w) {
  const GaussRule& g = gauss_legendre(n);
  x.clear();
  w.clear();
  const double d = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double c = a + (p + 0.5) * d, h = 0.5 * d;
    for (int i = 0; i < n; ++i) {
      x.push_back(c + h * g.x[i]);
      w.push_back(h * g.w[i]);
    }
  }
}

namespace {

size_t locate(const std::vector<double>& s, double t) {
  auto it = std::upper_bound(s.begin(), s.end(), t);
  size_t i = it == s.begin() ? 0 : static_cast<size_t>(it - s.begin()) - 1;
  return std::min(i, s.size() - 2);
}

// Power-basis coefficients of the cubic on interval i in t = s - s_i.
std::array<double, 4> interval_coeffs(const CubicHermite& c, size_t i) {
  const double h = c.s[i + 1] - c.s[i];
  const double f0 = c.f[i], f1 = c.f[i + 1], d0 = c.d[i], d1 = c.d[i + 1];
  const double a2 = (3.0 * (f1 - f0) / h - 2.0 * d0 - d1) / h;
  const double a3 = (d0 + d1 - 2.0 * (f1 - f0) / h) / (h * h);
  return {f0, d0, a2, a3};
}

}  // namespace

double CubicHermite::eval(double t) const {
  const size_t i = locate(s, t);
  const auto a = interval_coeffs(*this, i);
  const double u = t - s[i];
  return a[0] + u * (a[1] + u * (a[2] + u * a[3]));
}

double CubicHermite::deriv(double t) const {
  const size_t i = locate(s, t);
  const auto a = interval_coeffs(*this, i);
  const double u = t - s[i];
  return a[1] + u * (2.0 * a[2] + 3.0 * u * a[3]);
}

CubicHermite clamped_spline(std::vector<double> s, std::vector<double> f, double d_first, double d_last) {
  const size_t n = s.size();
  if (n < 3 || f.size() != n) throw std::invalid_argument("clamped_spline: need at least three nodes");
  // Unknowns are the nodal slopes; interior rows enforce continuity of the second derivative.
  gsl_vector* diag = gsl_vector_alloc(n);
  gsl_vector* upper = gsl_vector_alloc(n - 1);
  gsl_vector* lower = gsl_vector_alloc(n - 1);
  gsl_vector* rhs = gsl_vector_alloc(n);
  gsl_vector* sol = gsl_vector_alloc(n);
  gsl_vector_set(diag, 0, 1.0);
  gsl_vector_set(upper, 0, 0.0);
  gsl_vector_set(rhs, 0, d_first);
  for (size_t i = 1; i + 1 < n; ++i) {
    const double h0 = s[i] - s[i - 1], h1 = s[i + 1] - s[i];
    gsl_vector_set(lower, i - 1, 1.0 / h0);
    gsl_vector_set(diag, i, 2.0 / h0 + 2.0 / h1);
    gsl_vector_set(upper, i, 1.0 / h1);
    gsl_vector_set(rhs, i, 3.0 * (f[i] - f[i - 1]) / (h0 * h0) + 3.0 * (f[i + 1] - f[i]) / (h1 * h1));
  }
  gsl_vector_set(lower, n - 2, 0.0);
  gsl_vector_set(diag, n - 1, 1.0);
  gsl_vector_set(rhs, n - 1, d_last);
  gsl_linalg_solve_tridiag(diag, upper, lower, rhs, sol);
  CubicHermite c;
  c.d.resize(n);
  for (size_t i = 0; i < n; ++i) c.d[i] = gsl_vector_get(sol, i);
  c.s = std::move(s);
  c.f = std::move(f);
  gsl_vector_free(diag);
  gsl_vector_free(upper);
  gsl_vector_free(lower);
  gsl_vector_free(rhs);
  gsl_vector_free(sol);
  return c;
}

std::array<cplx, 4> oscillatory_moments(double h, double k) {
  std::array<cplx, 4> m{};
  const double kh = k * h;
  if (std::fabs(kh) < 1.0) {
    // Power series of the exponential; converges fast for |kh| < 1.
    for (int j = 0; j < 4; ++j) {
      cplx term = 1.0, sum = 0.0;
      double hp = std::pow(h, j + 1);
      for (int q = 0; q < 40; ++q) {
        sum += term / double(j + q + 1);
        term *= cplx(0.0, kh) / double(q + 1);
        if (std::abs(term) < 1e-18) break;
      }
      m[j] = hp * sum;
    }
    return m;
  }
  const cplx ik(0.0, k);
  const cplx e = std::exp(cplx(0.0, kh));
  m[0] = (e - 1.0) / ik;
  double hj = 1.0;
  for (int j = 1; j < 4; ++j) {
    hj *= h;
    m[j] = (hj * e - double(j) * m[j - 1]) / ik;
  }
  return m;
}

cplx filon_cubic(const CubicHermite& c, double k) {
  cplx total = 0.0;
  for (size_t i = 0; i + 1 < c.s.size(); ++i) {
    const double h = c.s[i + 1] - c.s[i];
    const auto a = interval_coeffs(c, i);
    const auto m = oscillatory_moments(h, k);
    const cplx part = a[0] * m[0] + a[1] * m[1] + a[2] * m[2] + a[3] * m[3];
    total += std::exp(cplx(0.0, k * c.s[i])) * part;
  }
  return total;
}

namespace {

// Spline slopes of equally spaced samples.
std::vector<double> spline_slopes(const std::vector<double>& f, double h) {
  const size_t n = f.size();
  std::vector<double> s(n);
  for (size_t i = 0; i < n; ++i) s[i] = i * h;
  const double d0 = (-11.0 * f[0] + 18.0 * f[1] - 9.0 * f[2] + 2.0 * f[3]) / (6.0 * h);
  const double d1 = (11.0 * f[n - 1] - 18.0 * f[n - 2] + 9.0 * f[n - 3] - 2.0 * f[n - 4]) / (6.0 * h);
  return clamped_spline(std::move(s), f, d0, d1).d;
}

}  // namespace

UniformBicubic::UniformBicubic(double x0, double x1, int nx, double y0, double y1, int ny, std::vector<double> values)
    : x0_(x0), hx_((x1 - x0) / (nx - 1)), y0_(y0), hy_((y1 - y0) / (ny - 1)), nx_(nx), ny_(ny), f_(std::move(values)) {
  if (nx < 4 || ny < 4 || f_.size() != static_cast<size_t>(nx) * ny)
    throw std::invalid_argument("UniformBicubic: need a grid of at least 4 x 4 values");
  fx_.assign(f_.size(), 0.0);
  fy_.assign(f_.size(), 0.0);
  fxy_.assign(f_.size(), 0.0);
  std::vector<double> line;
  for (int j = 0; j < ny; ++j) {
    line.resize(nx);
    for (int i = 0; i < nx; ++i) line[i] = f_[i * ny + j];
    const auto d = spline_slopes(line, hx_);
    for (int i = 0; i < nx; ++i) fx_[i * ny + j] = d[i];
  }
  for (int i = 0; i < nx; ++i) {
    line.assign(f_.begin() + i * ny, f_.begin() + (i + 1) * ny);
    const auto d = spline_slopes(line, hy_);
    std::copy(d.begin(), d.end(), fy_.begin() + i * ny);
    line.assign(fx_.begin() + i * ny, fx_.begin() + (i + 1) * ny);
    const auto dd = spline_slopes(line, hy_);
    std::copy(dd.begin(), dd.end(), fxy_.begin() + i * ny);
  }
}

double UniformBicubic::eval(double x, double y) const {
  double u = (x - x0_) / hx_, v = (y - y0_) / hy_;
  int i = std::clamp(static_cast<int>(std::floor(u)), 0, nx_ - 2);
  int j = std::clamp(static_cast<int>(std::floor(v)), 0, ny_ - 2);
  u -= i;
  v -= j;
  // Hermite basis: values H0, H1 and slopes K0, K1 on the unit interval.
  const double hu[2] = {(2.0 * u - 3.0) * u * u + 1.0, (3.0 - 2.0 * u) * u * u};
  const double ku[2] = {((u - 2.0) * u + 1.0) * u, (u - 1.0) * u * u};
  const double hv[2] = {(2.0 * v - 3.0) * v * v + 1.0, (3.0 - 2.0 * v) * v * v};
  const double kv[2] = {((v - 2.0) * v + 1.0) * v, (v - 1.0) * v * v};
  double s = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const size_t k = static_cast<size_t>(i + a) * ny_ + (j + b);
      s += f_[k] * hu[a] * hv[b] + hx_ * fx_[k] * ku[a] * hv[b] + hy_ * fy_[k] * hu[a] * kv[b] +
           hx_ * hy_ * fxy_[k] * ku[a] * kv[b];
    }
  return s;
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line: need two or more points");
  LinearFit out;
  double c00, c01, c11, sumsq;
  gsl_fit_linear(x.data(), 1, y.data(), 1, x.size(), &out.intercept, &out.slope, &c00, &c01, &c11, &sumsq);
  out.rms_residual = std::sqrt(sumsq / double(x.size()));
  return out;
}

}  // namespace conelight
