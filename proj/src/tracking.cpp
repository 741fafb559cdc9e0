#include "phystrack/tracking.hpp"

#include <Eigen/QR>
#include <spdlog/spdlog.h>

#include "phystrack/dynamics.hpp"
#include "phystrack/error.hpp"
#include "phystrack/kinematics.hpp"
#include "phystrack/lsqr.hpp"

namespace phystrack {
namespace {

// Stacked least squares [A; J; √β M] q̈ ≈ [θ̈_des; r̈_des - J̇q̇; √β (-h + Jcᵀλ)].
TrackingOutput solve_tracking(const TrackingConfig& config, const FrameDynamics& dyn, double beta,
                              const VecX& theta_ddot_des, const VecX& r_ddot_des,
                              const VecX& contact_force) {
  const int n = static_cast<int>(dyn.mass.rows());
  const int m3 = static_cast<int>(dyn.jacobian.rows());
  if (theta_ddot_des.size() != n - 3 || r_ddot_des.size() != m3 || contact_force.size() != n) {
    throw ConfigurationError("tracking targets do not match the skeleton");
  }
  const double sb = std::sqrt(beta);
  MatX a = MatX::Zero(n - 3 + m3 + n, n);
  VecX b(n - 3 + m3 + n);
  a.block(0, 3, n - 3, n - 3).setIdentity();
  a.middleRows(n - 3, m3) = dyn.jacobian;
  a.bottomRows(n) = sb * dyn.mass;
  b << theta_ddot_des, r_ddot_des - dyn.jdot_qdot, sb * (contact_force - dyn.bias);

  TrackingOutput out;
  const int max_it = config.lsqr_max_iterations > 0 ? config.lsqr_max_iterations : 10 * n;
  LsqrResult sol = lsqr(a, b, config.lsqr_tolerance, max_it);
  out.report.iterations = sol.iterations;
  out.report.converged = sol.converged;
  out.report.residual_norm = sol.residual_norm;
  if (sol.converged) {
    out.qddot = std::move(sol.x);
  } else {
    spdlog::debug("lsqr stopped after {} iterations, residual {}", sol.iterations, sol.residual_norm);
    if (!config.dense_fallback || n > 100) {
      throw NumericalError("tracking solve did not converge (residual " +
                           std::to_string(sol.residual_norm) + ")");
    }
    out.qddot = a.colPivHouseholderQr().solve(b);
    out.report.used_dense_fallback = true;
    out.report.residual_norm = (a * out.qddot - b).norm();
  }
  if (!out.qddot.allFinite()) throw NumericalError("tracking solve produced non-finite accelerations");
  out.tau = dyn.mass * out.qddot + dyn.bias - contact_force;
  return out;
}

}  // namespace

TrackingConfig TrackingConfig::for_model(const SkeletonModel& model) {
  TrackingConfig c;
  c.beta_tau = 1e-3 / model.total_mass();
  c.beta_tau_star = 3.0 * c.beta_tau;
  return c;
}

void TrackingConfig::validate() const {
  for (double x : {kp_theta, kp_r, kd_theta, kd_r, beta_tau, beta_tau_star, dt, d_th, lsqr_tolerance}) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw ConfigurationError("tracking gains, weights, dt, d_th and tolerance must be positive");
    }
  }
  if (!(pull_factor >= 0.0 && pull_factor <= 1.0)) {
    throw ConfigurationError("pull_factor must lie in [0, 1]");
  }
  if (lsqr_max_iterations < 0) throw ConfigurationError("lsqr_max_iterations must be >= 0");
}

FrameDynamics evaluate_frame_dynamics(const SkeletonModel& model, const CharacterState& state) {
  FrameDynamics d;
  d.mass = mass_matrix(model, state.q);
  d.bias = bias_forces(model, state.q, state.qdot);
  d.jacobian = joint_jacobian(model, state.q);
  d.jdot_qdot = jdot_qdot(model, state.q, state.qdot);
  d.positions = stack_positions(forward_kinematics(model, state.q));
  d.velocities = d.jacobian * state.qdot;
  return d;
}

VecX build_reference(const SkeletonModel& model, const VecX& theta_ref, const Vec3& root_position,
                     const Vec3& refined_velocity, const VecX& current_positions,
                     const std::array<double, kEndpointCount>& s, double dt) {
  const Vec3 root = root_position + refined_velocity * dt;
  VecX r = stack_positions(forward_kinematics(model, compose_configuration(root, theta_ref)));
  if (current_positions.size() != r.size()) {
    throw ConfigurationError("build_reference: current positions do not match the skeleton");
  }
  for (Endpoint e : kAllEndpoints) {
    const int j = model.endpoint_joint(e);
    const double t = s[static_cast<int>(e)];
    r.segment<3>(3 * j) = (1.0 - t) * r.segment<3>(3 * j) + t * current_positions.segment<3>(3 * j);
  }
  return r;
}

VecX linear_pd(const TrackingConfig& config, const VecX& r_ref, const VecX& r, const VecX& rdot) {
  return config.kp_r * (r_ref - r) - config.kd_r * rdot;
}

PdTargets dual_pd(const TrackingConfig& config, const VecX& theta_ref, const VecX& q, const VecX& qdot,
                  const VecX& r_ref, const VecX& r, const VecX& rdot) {
  const Eigen::Index k = theta_ref.size();
  if (q.size() != k + 3 || qdot.size() != k + 3) {
    throw ConfigurationError("dual_pd: state does not match reference pose");
  }
  PdTargets out;
  out.theta_ddot.resize(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    out.theta_ddot(i) =
        config.kp_theta * wrap_angle(theta_ref(i) - q(3 + i)) - config.kd_theta * qdot(3 + i);
  }
  out.r_ddot = linear_pd(config, r_ref, r, rdot);
  return out;
}

TrackingOutput pretrack(const TrackingConfig& config, const FrameDynamics& dyn,
                        const VecX& theta_ddot_des, const VecX& r_ddot_des) {
  return solve_tracking(config, dyn, config.beta_tau, theta_ddot_des, r_ddot_des,
                        VecX::Zero(dyn.mass.rows()));
}

TrackingOutput pretrack(const SkeletonModel& model, const TrackingConfig& config,
                        const CharacterState& state, const VecX& theta_ddot_des,
                        const VecX& r_ddot_des) {
  return pretrack(config, evaluate_frame_dynamics(model, state), theta_ddot_des, r_ddot_des);
}

TrackingOutput retrack(const TrackingConfig& config, const FrameDynamics& dyn,
                       const VecX& theta_ddot_des, const VecX& r_ddot_des_star,
                       const VecX& contact_force) {
  return solve_tracking(config, dyn, config.beta_tau_star, theta_ddot_des, r_ddot_des_star,
                        contact_force);
}

TrackingOutput retrack(const SkeletonModel& model, const TrackingConfig& config,
                       const CharacterState& state, const VecX& theta_ddot_des,
                       const VecX& r_ddot_des_star, const MatX& contact_jacobian,
                       const VecX& lambda) {
  VecX contact_force = VecX::Zero(model.dof_count());
  if (lambda.size() > 0) contact_force = contact_jacobian.transpose() * lambda;
  return retrack(config, evaluate_frame_dynamics(model, state), theta_ddot_des, r_ddot_des_star,
                 contact_force);
}

CharacterState integrate(const CharacterState& state, const VecX& qddot, double dt,
                         Integrator integrator) {
  if (!(dt > 0.0)) throw ConfigurationError("integrate: dt must be positive");
  CharacterState next;
  next.qdot = state.qdot + qddot * dt;
  next.q = state.q + (integrator == Integrator::kExplicit ? state.qdot : next.qdot) * dt;
  return next;
}

}  // namespace phystrack
