#pragma once

#include <array>

#include "phystrack/skeleton.hpp"

namespace phystrack {

/// Order of the state update after re-tracking.
enum class Integrator {
  /// q̇ += q̈ dt, then q += q̇ dt. With kp dt² = kd dt = 1 this lands on the
  /// reference one frame later.
  kSemiImplicit,
  /// q += q̇ dt with the old velocity, then q̇ += q̈ dt. Only marginally
  /// stable at the default gains (closed-loop poles on the unit circle).
  kExplicit,
};

struct TrackingConfig {
  double kp_theta = 3600.0;  // [1/s²]
  double kp_r = 3600.0;
  double kd_theta = 60.0;  // [1/s]
  double kd_r = 60.0;
  double beta_tau = 1e-3 / 80.0;  // 1e-3 / total mass
  double beta_tau_star = 3e-3 / 80.0;
  double dt = 1.0 / 60.0;  // [s]
  double d_th = 0.15;      // contact reference pull-down range [m]
  double pull_factor = 0.1;
  double lsqr_tolerance = 1e-10;
  int lsqr_max_iterations = 0;  // 0 means 10 n
  bool dense_fallback = true;
  Integrator integrator = Integrator::kSemiImplicit;

  /// Defaults with force regularization scaled to the model's mass.
  static TrackingConfig for_model(const SkeletonModel& model);
  /// Throws ConfigurationError on non-positive gains, weights or step.
  void validate() const;
};

/// Quantities shared by both tracking passes of one frame.
struct FrameDynamics {
  MatX mass;       // M(q)
  VecX bias;       // h(q, q̇)
  MatX jacobian;   // joint-centre Jacobian, 3k x n
  VecX jdot_qdot;  // J̇ q̇
  VecX positions;  // r, stacked
  VecX velocities; // ṙ = J q̇
};
FrameDynamics evaluate_frame_dynamics(const SkeletonModel& model, const CharacterState& state);

struct SolveReport {
  int iterations = 0;
  bool converged = false;
  bool used_dense_fallback = false;
  double residual_norm = 0.0;
};

struct TrackingOutput {
  VecX qddot;
  VecX tau;  // generalized forces; tau.head(6) is the root residual
  SolveReport report;
};

/// Joint position targets: FK of θ_ref with the root moved to p + ṽ dt, then
/// each endpoint pulled toward its current position by its stationary
/// probability. Stacked 3k vector.
VecX build_reference(const SkeletonModel& model, const VecX& theta_ref, const Vec3& root_position,
                     const Vec3& refined_velocity, const VecX& current_positions,
                     const std::array<double, kEndpointCount>& s, double dt);

struct PdTargets {
  VecX theta_ddot;  // length n - 3
  VecX r_ddot;      // length 3k
};

/// Angle errors are wrapped to (-pi, pi] per DOF.
PdTargets dual_pd(const TrackingConfig& config, const VecX& theta_ref, const VecX& q, const VecX& qdot,
                  const VecX& r_ref, const VecX& r, const VecX& rdot);

/// Linear accelerations only; used again after the references are adjusted.
VecX linear_pd(const TrackingConfig& config, const VecX& r_ref, const VecX& r, const VecX& rdot);

/// Contact-free tracking pass. τ = M q̈ + h.
TrackingOutput pretrack(const TrackingConfig& config, const FrameDynamics& dyn,
                        const VecX& theta_ddot_des, const VecX& r_ddot_des);
TrackingOutput pretrack(const SkeletonModel& model, const TrackingConfig& config,
                        const CharacterState& state, const VecX& theta_ddot_des,
                        const VecX& r_ddot_des);

/// Tracking pass with contact forces. `contact_force` is Jcᵀλ in generalized
/// coordinates; τ* = M q̈* + h - Jcᵀλ.
TrackingOutput retrack(const TrackingConfig& config, const FrameDynamics& dyn,
                       const VecX& theta_ddot_des, const VecX& r_ddot_des_star,
                       const VecX& contact_force);
TrackingOutput retrack(const SkeletonModel& model, const TrackingConfig& config,
                       const CharacterState& state, const VecX& theta_ddot_des,
                       const VecX& r_ddot_des_star, const MatX& contact_jacobian,
                       const VecX& lambda);

CharacterState integrate(const CharacterState& state, const VecX& qddot, double dt,
                         Integrator integrator = Integrator::kSemiImplicit);

}  // namespace phystrack
