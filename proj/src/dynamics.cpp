#include "phystrack/dynamics.hpp"

#include "phystrack/error.hpp"
#include "phystrack/kinematics.hpp"
#include "spatial.hpp"

namespace phystrack {
namespace {

void check_lengths(const SkeletonModel& model, const VecX& v, const char* what) {
  if (v.size() != model.dof_count()) {
    throw ConfigurationError(std::string(what) + " length does not match the skeleton");
  }
}

// DOF indices moved by joint j: the root joint also owns the translation DOFs.
int first_dof(int joint) { return joint == 0 ? 0 : SkeletonModel::rotation_dof(joint); }
int last_dof(int joint) { return SkeletonModel::rotation_dof(joint) + 3; }

}  // namespace

MatX mass_matrix(const SkeletonModel& model, const VecX& q) {
  const KinematicFrames f = compute_frames(model, q);
  const int k = model.joint_count();
  const int n = model.dof_count();

  std::vector<spatial::Inertia> composite(k);
  for (int j = 0; j < k; ++j) {
    composite[j] = spatial::world_inertia(model.body(j), f.rotation[j], f.position[j]);
  }
  // Everything is referenced at the world origin, so composites simply add.
  for (int j = k - 1; j > 0; --j) composite[model.joint(j).parent] += composite[j];

  const spatial::Propagation twists =
      spatial::propagate(model, f, VecX::Zero(n), VecX::Zero(n), Vec3::Zero());

  MatX m = MatX::Zero(n, n);
  for (int j = k - 1; j >= 0; --j) {
    for (int a = first_dof(j); a < last_dof(j); ++a) {
      const spatial::Force force = composite[j] * twists.dof_twist[a];
      for (int i = j; i >= 0; i = model.joint(i).parent) {
        for (int b = first_dof(i); b < last_dof(i); ++b) {
          if (i == j && b > a) continue;
          const double value = twists.dof_twist[b].dot(force);
          m(b, a) = value;
          m(a, b) = value;
        }
      }
    }
  }
  return m;
}

VecX inverse_dynamics(const SkeletonModel& model, const VecX& q, const VecX& qdot,
                      const VecX& qddot) {
  check_lengths(model, qdot, "qdot");
  check_lengths(model, qddot, "qddot");
  const KinematicFrames f = compute_frames(model, q);
  const int k = model.joint_count();
  const spatial::Propagation p = spatial::propagate(model, f, qdot, qddot, model.gravity());

  std::vector<spatial::Force> force(k);
  for (int j = 0; j < k; ++j) {
    const spatial::Inertia inertia =
        spatial::world_inertia(model.body(j), f.rotation[j], f.position[j]);
    force[j] = inertia * p.acceleration[j] +
               spatial::cross_force(p.velocity[j], inertia * p.velocity[j]);
  }
  for (int j = k - 1; j > 0; --j) force[model.joint(j).parent] += force[j];

  VecX tau(model.dof_count());
  for (int j = 0; j < k; ++j) {
    for (int a = first_dof(j); a < last_dof(j); ++a) tau(a) = p.dof_twist[a].dot(force[j]);
  }
  return tau;
}

VecX bias_forces(const SkeletonModel& model, const VecX& q, const VecX& qdot) {
  return inverse_dynamics(model, q, qdot, VecX::Zero(model.dof_count()));
}

double kinetic_energy(const SkeletonModel& model, const VecX& q, const VecX& qdot) {
  check_lengths(model, qdot, "qdot");
  return 0.5 * qdot.dot(mass_matrix(model, q) * qdot);
}

}  // namespace phystrack
