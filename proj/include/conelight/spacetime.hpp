#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace conelight {

using Vec3 = std::array<double, 3>;

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
Vec3 normalized(const Vec3& a);

// Two unit vectors completing n to a right-handed orthonormal frame.
void orthonormal_frame(const Vec3& n, Vec3& e1, Vec3& e2);

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct FourVector {
  double t = 0.0;
  Vec3 x{0.0, 0.0, 0.0};
};

inline FourVector operator+(const FourVector& a, const FourVector& b) { return {a.t + b.t, a.x + b.x}; }
inline FourVector operator-(const FourVector& a, const FourVector& b) { return {a.t - b.t, a.x - b.x}; }
inline FourVector operator*(double s, const FourVector& a) { return {s * a.t, s * a.x}; }

struct ShellCoords {
  double tau = 1.0;
  Vec3 x{0.0, 0.0, 0.0};
};

// Signature (+,-,-,-).
double minkowski_dot(const FourVector& a, const FourVector& b);
bool in_forward_cone(const FourVector& p, const FourVector& apex = {});
bool spacelike_separated(const FourVector& a, const FourVector& b);

FourVector xi(const ShellCoords& c);
ShellCoords xi_inverse(const FourVector& p);

}  // namespace conelight
