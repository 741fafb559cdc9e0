#pragma once

// Spatial vectors in world coordinates, referenced at the world origin.
// Motion: [angular velocity; linear velocity of the body point at the origin].
// Force:  [moment about the origin; force].

#include <vector>

#include "phystrack/kinematics.hpp"

namespace phystrack::spatial {

using Motion = Eigen::Matrix<double, 6, 1>;
using Force = Eigen::Matrix<double, 6, 1>;
using Inertia = Eigen::Matrix<double, 6, 6>;

inline Motion cross_motion(const Motion& v, const Motion& m) {
  Motion out;
  out.head<3>() = v.head<3>().cross(m.head<3>());
  out.tail<3>() = v.head<3>().cross(m.tail<3>()) + v.tail<3>().cross(m.head<3>());
  return out;
}

inline Force cross_force(const Motion& v, const Force& f) {
  Force out;
  out.head<3>() = v.head<3>().cross(f.head<3>()) + v.tail<3>().cross(f.tail<3>());
  out.tail<3>() = v.head<3>().cross(f.tail<3>());
  return out;
}

/// Unit twist of a rotation about `axis` through `point`.
inline Motion rotation_twist(const Vec3& axis, const Vec3& point) {
  Motion m;
  m.head<3>() = axis;
  m.tail<3>() = point.cross(axis);
  return m;
}

inline Motion translation_twist(int k) {
  Motion m = Motion::Zero();
  m(3 + k) = 1.0;
  return m;
}

/// Classical acceleration of the body point currently at `p`.
inline Vec3 point_acceleration(const Motion& v, const Motion& a, const Vec3& p) {
  const Vec3 w = v.head<3>();
  const Vec3 vp = v.tail<3>() + w.cross(p);
  return a.tail<3>() + a.head<3>().cross(p) + w.cross(vp);
}

/// Spatial inertia of body j about the world origin.
inline Inertia world_inertia(const BodyInertia& body, const Mat3& rotation, const Vec3& origin) {
  const Vec3 c = origin + rotation * body.com;
  const Mat3 cx = skew(c);
  const Mat3 ic = rotation * body.inertia * rotation.transpose();
  Inertia out;
  out.topLeftCorner<3, 3>() = ic - body.mass * cx * cx;
  out.topRightCorner<3, 3>() = body.mass * cx;
  out.bottomLeftCorner<3, 3>() = -body.mass * cx;
  out.bottomRightCorner<3, 3>() = body.mass * Mat3::Identity();
  return out;
}

struct Propagation {
  Motion base_velocity;      // translating base that carries the root joint
  Motion base_acceleration;
  std::vector<Motion> velocity;      // per joint body
  std::vector<Motion> acceleration;
  /// Twist of every DOF: translation DOFs 0..2, then the Euler DOFs.
  std::vector<Motion> dof_twist;
};

/// Forward pass of velocities and accelerations. The base acceleration is
/// offset by -gravity so gravity enters as a fictitious base acceleration.
inline Propagation propagate(const SkeletonModel& model, const KinematicFrames& f,
                             const VecX& qdot, const VecX& qddot, const Vec3& gravity) {
  const int k = model.joint_count();
  Propagation p;
  p.velocity.resize(k);
  p.acceleration.resize(k);
  p.dof_twist.resize(model.dof_count());
  p.base_velocity.setZero();
  p.base_velocity.tail<3>() = qdot.head<3>();
  p.base_acceleration.setZero();
  p.base_acceleration.tail<3>() = qddot.head<3>() - gravity;
  for (int d = 0; d < 3; ++d) p.dof_twist[d] = translation_twist(d);

  for (int j = 0; j < k; ++j) {
    const int parent = model.joint(j).parent;
    Motion v = parent < 0 ? p.base_velocity : p.velocity[parent];
    Motion a = parent < 0 ? p.base_acceleration : p.acceleration[parent];
    const int first = SkeletonModel::rotation_dof(j);
    for (int d = 0; d < 3; ++d) {
      const Motion s = rotation_twist(f.axis[j][d], f.position[j]);
      p.dof_twist[first + d] = s;
      // Each Euler axis is carried by the frame accumulated so far.
      a += cross_motion(v, s) * qdot(first + d) + s * qddot(first + d);
      v += s * qdot(first + d);
    }
    p.velocity[j] = v;
    p.acceleration[j] = a;
  }
  return p;
}

}  // namespace phystrack::spatial
