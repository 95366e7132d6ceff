#include "conelight/wave.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "conelight/profiles.hpp"

namespace conelight {

namespace {

// \int over one Hermite interval, exact for the cubic.
double hermite_integral(double h, double f0, double f1, double d0, double d1) {
  return h * (f0 + f1) / 2.0 + h * h * (d0 - d1) / 12.0;
}

}  // namespace

WaveBump::WaveBump(double a, int nodes, double k_cut, int k_nodes) : a_(a), L_(std::sqrt(2.0) * a) {
  if (!(a > 0.0)) throw DomainError("WaveBump: radius must be positive");
  if (nodes < 16) throw DomainError("WaveBump: too few nodes");
  const double h = 2.0 * L_ / (nodes - 1);
  std::vector<double> s(nodes), G(nodes), F(nodes, 0.0), F1(nodes, 0.0), F2(nodes, 0.0);
  for (int i = 0; i < nodes; ++i) {
    s[i] = -L_ + i * h;
    G[i] = g(s[i]);
  }
  s.back() = L_;
  for (int i = 1; i < nodes; ++i) F[i] = F[i - 1] + integrate_gl([&](double x) { return g(x); }, s[i - 1], s[i], 8);
  F.back() = 0.0;  // g is odd, so F returns to zero at L
  for (int i = 1; i < nodes; ++i) F1[i] = F1[i - 1] + hermite_integral(h, F[i - 1], F[i], G[i - 1], G[i]);
  for (int i = 1; i < nodes; ++i) F2[i] = F2[i - 1] + hermite_integral(h, F1[i - 1], F1[i], F[i - 1], F[i]);
  F1_end_ = F1.back();
  F2_end_ = F2.back();
  F_ = {s, F, G};
  F1_ = {s, F1, F};
  F2_ = {s, F2, F1};

  // Time-axis marginal S(t) at Gauss nodes on [0, a]; 64 panels keep k_cut radians well resolved.
  std::vector<double> tx, tw;
  composite_nodes(0.0, a, 64, 16, tx, tw);
  for (size_t i = 0; i < tx.size(); ++i) {
    const double rm = std::sqrt(std::max(0.0, a * a - tx[i] * tx[i]));
    const double S =
        integrate_composite([&](double r) { return r * r * profile(tx[i], r); }, 0.0, rm, 4, 16) / M_PI;
    tx_.push_back(tx[i]);
    tw_.push_back(2.0 * tw[i] * S);  // S is even in t
  }
  k_max_ = k_cut / a;
  std::vector<double> ks(k_nodes), bv(k_nodes), bd(k_nodes);
  for (int i = 0; i < k_nodes; ++i) {
    ks[i] = k_max_ * i / (k_nodes - 1);
    double v = 0.0, d = 0.0;
    for (size_t j = 0; j < tx_.size(); ++j) {
      v += tw_[j] * std::cos(ks[i] * tx_[j]);
      d -= tw_[j] * tx_[j] * std::sin(ks[i] * tx_[j]);
    }
    bv[i] = v;
    bd[i] = d;
  }
  B_ = {ks, bv, bd};
}

double WaveBump::profile(double t, double R) const { return mollifier(std::sqrt(t * t + R * R) / a_); }

double WaveBump::g(double alpha) const {
  const double b2 = 2.0 * a_ * a_ - alpha * alpha;
  if (b2 <= 0.0) return 0.0;
  const double bm = std::sqrt(b2);
  // The integrand is even in beta.
  const double i = integrate_composite(
      [&](double beta) { return mollifier(std::sqrt(0.5 * (alpha * alpha + beta * beta)) / a_); }, 0.0, bm, 4, 16);
  return alpha * i;
}

double WaveBump::F(double A) const { return std::abs(A) >= L_ ? 0.0 : F_.eval(A); }

double WaveBump::F1(double A) const {
  if (A <= -L_) return 0.0;
  if (A >= L_) return F1_end_;
  return F1_.eval(A);
}

double WaveBump::F2(double A) const {
  if (A <= -L_) return 0.0;
  if (A >= L_) return F2_end_ + F1_end_ * (A - L_);
  return F2_.eval(A);
}

double WaveBump::fourier(double k) const {
  if (k < 0.0) throw DomainError("WaveBump::fourier: negative wave number");
  if (k <= k_max_) return B_.eval(k);
  return fourier_hankel(k);
}

double WaveBump::fourier_hankel(double k) const {
  if (k < 0.0) throw DomainError("WaveBump::fourier_hankel: negative wave number");
  if (k == 0.0)
    return 0.5 * integrate_composite([&](double r) { return r * r * r * mollifier(r / a_); }, 0.0, a_, 4, 16);
  const int panels = std::max(4, static_cast<int>(std::ceil(k * a_ / 2.0)));
  return integrate_composite([&](double r) { return r * r * std::cyl_bessel_j(1.0, k * r) * mollifier(r / a_); },
                             0.0, a_, panels, 16) /
         k;
}

double WaveBump::commutator(double t, double R) const {
  if (R < 0.0) throw DomainError("WaveBump::commutator: negative radius");
  if (R < 1e-6 * a_) return 0.5 * g(t);  // limit of the difference quotient
  return (F(t + R) - F(t - R)) / (4.0 * R);
}

double WaveBump::enclosed(double t, double R) const {
  if (R < 0.0) throw DomainError("WaveBump::enclosed: negative radius");
  if (R == 0.0) return 0.0;
  if (R < 0.05 * a_) {
    // The closed form below cancels to O(R^3); integrate directly instead.
    return integrate_gl([&](double r) { return r * r * commutator(t, r); }, 0.0, R, 8) / (R * R);
  }
  // \int_0^R rho F(t + rho) = R F1(t + R) - F2(t + R) + F2(t) and
  // \int_0^R rho F(t - rho) = -R F1(t - R) + F2(t) - F2(t - R).
  return (R * (F1(t + R) + F1(t - R)) - F2(t + R) + F2(t - R)) / (4.0 * R * R);
}

const WaveBump& wave_bump(double a) {
  static std::mutex mu;
  static std::map<double, std::unique_ptr<WaveBump>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[a];
  if (!slot) slot = std::make_unique<WaveBump>(a);
  return *slot;
}

}  // namespace conelight
