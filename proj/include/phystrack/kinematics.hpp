#pragma once

#include <array>
#include <optional>
#include <vector>

#include "phystrack/skeleton.hpp"

namespace phystrack {

/// Per-joint frames for one configuration.
struct KinematicFrames {
  std::vector<Mat3> rotation;  // global rotation of each joint frame
  std::vector<Vec3> position;  // world position of each joint [m]
  /// World axes of the three Euler DOFs of each joint, in composition order.
  std::vector<std::array<Vec3, 3>> axis;
};

/// Generalized coordinates from a root translation and the joint Euler angles.
VecX compose_configuration(const Vec3& root, const VecX& theta);

/// Throws ConfigurationError when q does not match the skeleton.
KinematicFrames compute_frames(const SkeletonModel& model, const VecX& q);

/// World positions of every joint. `root_override` replaces the translation
/// entries q[0:3] when given.
std::vector<Vec3> forward_kinematics(const SkeletonModel& model, const VecX& q,
                                     const std::optional<Vec3>& root_override = std::nullopt);

/// Stacked positions (3k vector) in joint order.
VecX stack_positions(const std::vector<Vec3>& positions);

/// Linear-velocity Jacobian of every joint centre, 3k x n. Rows of joint j are
/// exactly zero in columns of DOFs that do not belong to a strict ancestor of
/// j (the root translation columns are identity blocks).
MatX joint_jacobian(const SkeletonModel& model, const VecX& q);

/// Rows of `joint_jacobian` for the given joints only.
MatX joint_jacobian_rows(const SkeletonModel& model, const VecX& q, std::span<const int> joints);

/// Velocity-product acceleration J̇ q̇ (length 3k), so r̈ = J q̈ + J̇ q̇.
VecX jdot_qdot(const SkeletonModel& model, const VecX& q, const VecX& qdot);

}  // namespace phystrack
