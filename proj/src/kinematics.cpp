#include "phystrack/kinematics.hpp"

#include "phystrack/error.hpp"
#include "spatial.hpp"

namespace phystrack {

VecX compose_configuration(const Vec3& root, const VecX& theta) {
  VecX q(3 + theta.size());
  q << root, theta;
  return q;
}

KinematicFrames compute_frames(const SkeletonModel& model, const VecX& q) {
  const int k = model.joint_count();
  if (q.size() != model.dof_count()) {
    throw ConfigurationError("q has length " + std::to_string(q.size()) + ", expected " +
                             std::to_string(model.dof_count()));
  }
  KinematicFrames f;
  f.rotation.resize(k);
  f.position.resize(k);
  f.axis.resize(k);
  for (int j = 0; j < k; ++j) {
    const int parent = model.joint(j).parent;
    const Mat3 parent_rot = parent < 0 ? Mat3::Identity() : f.rotation[parent];
    f.position[j] = parent < 0 ? Vec3(q.head<3>())
                               : Vec3(f.position[parent] + parent_rot * model.joint(j).offset);
    const Vec3 e = q.segment<3>(SkeletonModel::rotation_dof(j));
    const Mat3 rx = rot_x(e.x());
    const Mat3 rxy = rx * rot_y(e.y());
    f.axis[j] = {parent_rot.col(0), Vec3(parent_rot * rx.col(1)), Vec3(parent_rot * rxy.col(2))};
    f.rotation[j] = parent_rot * rxy * rot_z(e.z());
  }
  return f;
}

std::vector<Vec3> forward_kinematics(const SkeletonModel& model, const VecX& q,
                                     const std::optional<Vec3>& root_override) {
  if (!root_override) return compute_frames(model, q).position;
  VecX shifted = q;
  shifted.head<3>() = *root_override;
  return compute_frames(model, shifted).position;
}

VecX stack_positions(const std::vector<Vec3>& positions) {
  VecX out(3 * positions.size());
  for (std::size_t j = 0; j < positions.size(); ++j) out.segment<3>(3 * j) = positions[j];
  return out;
}

namespace {

void fill_jacobian_rows(const SkeletonModel& model, const KinematicFrames& f, int joint,
                        Eigen::Ref<MatX> rows) {
  rows.setZero();
  rows.leftCols<3>().setIdentity();
  const Vec3& target = f.position[joint];
  for (int a = model.joint(joint).parent; a >= 0; a = model.joint(a).parent) {
    const Vec3 arm = target - f.position[a];
    for (int d = 0; d < 3; ++d) {
      rows.col(SkeletonModel::rotation_dof(a) + d) = f.axis[a][d].cross(arm);
    }
  }
}

}  // namespace

MatX joint_jacobian(const SkeletonModel& model, const VecX& q) {
  const KinematicFrames f = compute_frames(model, q);
  const int k = model.joint_count();
  MatX jac(3 * k, model.dof_count());
  for (int j = 0; j < k; ++j) fill_jacobian_rows(model, f, j, jac.middleRows<3>(3 * j));
  return jac;
}

MatX joint_jacobian_rows(const SkeletonModel& model, const VecX& q, std::span<const int> joints) {
  const KinematicFrames f = compute_frames(model, q);
  MatX jac(3 * joints.size(), model.dof_count());
  for (std::size_t i = 0; i < joints.size(); ++i) {
    fill_jacobian_rows(model, f, joints[i], jac.middleRows<3>(3 * i));
  }
  return jac;
}

VecX jdot_qdot(const SkeletonModel& model, const VecX& q, const VecX& qdot) {
  if (qdot.size() != model.dof_count()) {
    throw ConfigurationError("qdot length does not match the skeleton");
  }
  const KinematicFrames f = compute_frames(model, q);
  const VecX zero = VecX::Zero(model.dof_count());
  const spatial::Propagation prop =
      spatial::propagate(model, f, qdot, zero, Vec3::Zero());
  VecX out(3 * model.joint_count());
  for (int j = 0; j < model.joint_count(); ++j) {
    // A joint centre is fixed in its parent's frame (root: the translating base).
    const int parent = model.joint(j).parent;
    const spatial::Motion& v = parent < 0 ? prop.base_velocity : prop.velocity[parent];
    const spatial::Motion& a = parent < 0 ? prop.base_acceleration : prop.acceleration[parent];
    out.segment<3>(3 * j) = spatial::point_acceleration(v, a, f.position[j]);
  }
  return out;
}

}  // namespace phystrack
