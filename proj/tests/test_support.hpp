#pragma once

#include <random>

#include "phystrack/skeleton.hpp"
#include "phystrack/tracking.hpp"

namespace phystrack::testing {

inline VecX random_vector(std::mt19937& rng, int n, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  VecX v(n);
  for (int i = 0; i < n; ++i) v(i) = u(rng);
  return v;
}

/// Random configuration: translation within 1 m, angles within `angle_scale`.
inline VecX random_configuration(const SkeletonModel& model, std::mt19937& rng,
                                 double angle_scale = 1.0) {
  VecX q = random_vector(rng, model.dof_count(), angle_scale);
  q.head<3>() = random_vector(rng, 3, 1.0);
  return q;
}

inline Mat3 random_rotation(std::mt19937& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Quaterniond quat(n(rng), n(rng), n(rng), n(rng));
  return quat.normalized().toRotationMatrix();
}

inline Vec3 random_unit(std::mt19937& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return Vec3(n(rng), n(rng), n(rng)).normalized();
}

/// A random tracking subproblem: state, desired accelerations, and a random
/// generalized contact force.
struct TrackingInstance {
  CharacterState state;
  FrameDynamics dyn;
  VecX theta_ddot;
  VecX r_ddot;
  VecX contact_force;
};

inline TrackingInstance random_tracking_instance(const SkeletonModel& model, std::mt19937& rng) {
  TrackingInstance t;
  t.state.q = random_configuration(model, rng, 1.5);
  t.state.qdot = random_vector(rng, model.dof_count(), 1.0);
  t.dyn = evaluate_frame_dynamics(model, t.state);
  t.theta_ddot = random_vector(rng, model.dof_count() - 3, 20.0);
  t.r_ddot = random_vector(rng, 3 * model.joint_count(), 5.0);
  t.contact_force = random_vector(rng, model.dof_count(), 50.0);
  return t;
}

}  // namespace phystrack::testing
