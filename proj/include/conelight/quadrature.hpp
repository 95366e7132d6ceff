#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <vector>

namespace conelight {

using cplx = std::complex<double>;

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

// Cached rule for n points; safe to call concurrently.
const GaussRule& gauss_legendre(int n);

template <class F>
double integrate_gl(F&& f, double a, double b, int n) {
  const GaussRule& g = gauss_legendre(n);
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += g.w[i] * f(c + h * g.x[i]);
  return h * s;
}

// Composite rule: `panels` equal panels with n points each.
template <class F>
double integrate_composite(F&& f, double a, double b, int panels, int n) {
  double s = 0.0;
  const double d = (b - a) / panels;
  for (int p = 0; p < panels; ++p) s += integrate_gl(f, a + p * d, a + (p + 1) * d, n);
  return s;
}

// Nodes and weights of a composite rule, for callers that fill sample arrays.
void composite_nodes(double a, double b, int panels, int n, std::vector<double>& x, std::vector<double>& w);

// Piecewise cubic with nodal values and first derivatives (C^2 when built as a spline).
struct CubicHermite {
  std::vector<double> s, f, d;
  double eval(double t) const;
  double deriv(double t) const;
};

// Cubic spline through (s, f) with prescribed end slopes.
CubicHermite clamped_spline(std::vector<double> s, std::vector<double> f, double d_first, double d_last);

// Exact integral of exp(i k t) times the piecewise cubic over its whole range.
cplx filon_cubic(const CubicHermite& h, double k);

// Moments  M_j = \int_0^h t^j e^{ikt} dt,  j = 0..3.
std::array<cplx, 4> oscillatory_moments(double h, double k);

// Bicubic Hermite interpolation on a uniform grid. Nodal derivatives come from clamped splines
// along grid lines whose end slopes are one-sided third order differences.
class UniformBicubic {
 public:
  UniformBicubic() = default;
  // values[i * ny + j] is the value at (x0 + i hx, y0 + j hy).
  UniformBicubic(double x0, double x1, int nx, double y0, double y1, int ny, std::vector<double> values);
  double eval(double x, double y) const;
  double x0() const { return x0_; }
  double x1() const { return x0_ + hx_ * (nx_ - 1); }
  double y0() const { return y0_; }
  double y1() const { return y0_ + hy_ * (ny_ - 1); }

 private:
  double x0_ = 0.0, hx_ = 1.0, y0_ = 0.0, hy_ = 1.0;
  int nx_ = 0, ny_ = 0;
  std::vector<double> f_, fx_, fy_, fxy_;
};

struct LinearFit {
  double slope = 0.0, intercept = 0.0, rms_residual = 0.0;
};
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace conelight
