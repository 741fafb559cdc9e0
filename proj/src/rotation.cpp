#include "phystrack/rotation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace phystrack {

Mat3 skew(const Vec3& a) {
  Mat3 m;
  m << 0.0, -a.z(), a.y(),
       a.z(), 0.0, -a.x(),
       -a.y(), a.x(), 0.0;
  return m;
}

Mat3 rot_x(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Mat3 m;
  m << 1.0, 0.0, 0.0,
       0.0, c, -s,
       0.0, s, c;
  return m;
}

Mat3 rot_y(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Mat3 m;
  m << c, 0.0, s,
       0.0, 1.0, 0.0,
       -s, 0.0, c;
  return m;
}

Mat3 rot_z(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Mat3 m;
  m << c, -s, 0.0,
       s, c, 0.0,
       0.0, 0.0, 1.0;
  return m;
}

Mat3 axis_angle(const Vec3& axis, double angle) {
  return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

Mat3 euler_xyz_to_matrix(const Vec3& euler) {
  return rot_x(euler.x()) * rot_y(euler.y()) * rot_z(euler.z());
}

Vec3 matrix_to_euler_xyz(const Mat3& r) {
  const double sy = std::clamp(r(0, 2), -1.0, 1.0);
  const double b = std::asin(sy);
  if (std::abs(sy) > 1.0 - 1e-12) {
    // Gimbal lock: only e0 +- e2 is observable, put it all in e0.
    const double a = std::atan2(r(2, 1), r(1, 1));
    return {a, b, 0.0};
  }
  const double a = std::atan2(-r(1, 2), r(2, 2));
  const double c = std::atan2(-r(0, 1), r(0, 0));
  return {a, b, c};
}

double rotation_angle(const Mat3& r) {
  // atan2 form stays accurate near 0 and pi where acos loses digits.
  const Vec3 axis_sin(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1));
  return std::atan2(0.5 * axis_sin.norm(), 0.5 * (r.trace() - 1.0));
}

double geodesic_angle(const Mat3& a, const Mat3& b) {
  return rotation_angle(a.transpose() * b);
}

double wrap_angle(double angle) {
  constexpr double kPi = std::numbers::pi;
  double wrapped = std::remainder(angle, 2.0 * kPi);
  if (wrapped <= -kPi) wrapped += 2.0 * kPi;
  return wrapped;
}

double orthonormality_error(const Mat3& r) {
  return (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff() +
         std::abs(r.determinant() - 1.0);
}

}  // namespace phystrack
