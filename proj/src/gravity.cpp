#include "phystrack/gravity.hpp"

#include <cmath>

#include <spdlog/spdlog.h>

#include "phystrack/error.hpp"

namespace phystrack {
namespace {

Vec3 unit_or_throw(const Vec3& v, const char* what) {
  const double n = v.norm();
  if (!std::isfinite(n) || n <= 0.0) {
    throw NumericalError(std::string(what) + " must be a finite nonzero vector");
  }
  return v / n;
}

}  // namespace

Vec3 root_frame_gravity(const Mat3& root_rotation, const Vec3& gravity_world) {
  Vec3 g = gravity_world;
  if (std::abs(g.norm() - 1.0) > 1e-6) {
    spdlog::warn("root_frame_gravity: gravity direction has norm {}, normalizing", g.norm());
    g = unit_or_throw(g, "gravity direction");
  }
  return root_rotation.transpose() * g;
}

Mat3 minimal_rotation(const Vec3& from, const Vec3& to) {
  const Vec3 a = unit_or_throw(from, "minimal_rotation input");
  const Vec3 b = unit_or_throw(to, "minimal_rotation input");
  const double c = a.dot(b);
  if (c < -1.0 + 1e-8) {
    int k = 0;
    a.cwiseAbs().minCoeff(&k);
    Vec3 axis = Vec3::Unit(k);
    axis = (axis - axis.dot(a) * a).normalized();
    return 2.0 * axis * axis.transpose() - Mat3::Identity();
  }
  const Vec3 cross = a.cross(b);
  const double s = cross.norm();
  if (s < 1e-15) return Mat3::Identity();
  return axis_angle(cross / s, std::atan2(s, c));
}

Mat3 correct_root_orientation(const Mat3& root_rotation, const Vec3& gravity_refined,
                              const Vec3& gravity_prev) {
  return root_rotation * minimal_rotation(gravity_refined, gravity_prev);
}

SwingTwist swing_twist(const Mat3& rotation, const Vec3& up) {
  const Vec3 u = unit_or_throw(up, "up axis");
  SwingTwist out;
  out.swing = minimal_rotation(rotation.transpose() * u, u);
  out.twist = rotation * out.swing.transpose();
  return out;
}

double heading_angle(const Mat3& rotation, const Vec3& up) {
  const Vec3 u = unit_or_throw(up, "up axis");
  const Mat3 twist = swing_twist(rotation, u).twist;
  int k = 0;
  u.cwiseAbs().minCoeff(&k);
  Vec3 ref = Vec3::Unit(k);
  ref = (ref - ref.dot(u) * u).normalized();
  const Vec3 turned = twist * ref;
  return wrap_angle(std::atan2(u.dot(ref.cross(turned)), ref.dot(turned)));
}

Vec3 reexpress_in_root(const Mat3& root_old, const Mat3& root_new, const Vec3& v) {
  return root_new.transpose() * (root_old * v);
}

Mat3 reexpress_in_root(const Mat3& root_old, const Mat3& root_new, const Mat3& r) {
  return root_new.transpose() * (root_old * r);
}

}  // namespace phystrack
