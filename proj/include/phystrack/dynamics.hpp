#pragma once

#include "phystrack/skeleton.hpp"

namespace phystrack {

/// Generalized inertia matrix M(q), n x n, by the composite-rigid-body
/// algorithm.
MatX mass_matrix(const SkeletonModel& model, const VecX& q);

/// Non-inertial and gravity term h(q, q̇) so that M q̈ + h = τ. Evaluated as
/// recursive Newton-Euler inverse dynamics with q̈ = 0.
VecX bias_forces(const SkeletonModel& model, const VecX& q, const VecX& qdot);

/// Generalized forces τ = M q̈ + h by recursive Newton-Euler. The first six
/// entries are the root residual: world force [N], then the Euler-coordinate
/// torques about the root joint origin.
VecX inverse_dynamics(const SkeletonModel& model, const VecX& q, const VecX& qdot,
                      const VecX& qddot);

/// Kinetic energy ½ q̇ᵀ M q̇.
double kinetic_energy(const SkeletonModel& model, const VecX& q, const VecX& qdot);

}  // namespace phystrack
