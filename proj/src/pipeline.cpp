#include "phystrack/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <spdlog/spdlog.h>

#include "phystrack/error.hpp"
#include "phystrack/gravity.hpp"
#include "phystrack/kinematics.hpp"

namespace phystrack {

void PipelineConfig::validate() const {
  tracking.validate();
  contact.validate();
  if (!(timestamp_tolerance > 0.0)) throw ConfigurationError("timestamp tolerance must be positive");
}

namespace {

VecX gravity_corrected(const SkeletonModel& model, const EstimatorFrame& frame, bool enabled) {
  VecX theta = frame.theta_ref;
  if (!enabled || !frame.g_root) return theta;
  const Mat3 root = euler_xyz_to_matrix(theta.head<3>());
  const Vec3 implied = root.transpose() * model.gravity_direction();
  const Vec3 refined = frame.g_root->normalized();
  if ((refined - implied).norm() < 1e-12) return theta;
  theta.head<3>() = matrix_to_euler_xyz(correct_root_orientation(root, refined, implied));
  return theta;
}

}  // namespace

Session initialize_session(const SkeletonModel& model, const EstimatorFrame& first,
                           const PipelineConfig& config) {
  validate_frame(model, first);
  Session s;
  const VecX theta = gravity_corrected(model, first, config.gravity_correction);
  s.state.q = compose_configuration(Vec3::Zero(), theta);
  s.state.qdot = VecX::Zero(model.dof_count());
  s.ground_height = std::numeric_limits<double>::infinity();
  for (const Vec3& p : forward_kinematics(model, s.state.q)) {
    s.ground_height = std::min(s.ground_height, height_of(model, p));
  }
  return s;
}

Pipeline::Pipeline(const SkeletonModel& model, PipelineConfig config)
    : model_(model), config_(std::move(config)) {
  config_.validate();
}

VecX Pipeline::reference_pose(const EstimatorFrame& frame) const {
  return gravity_corrected(model_, frame, config_.gravity_correction);
}

FrameOutput Pipeline::step(const EstimatorFrame& frame) {
  validate_frame(model_, frame);
  if (frame_ == 0) {
    session_ = initialize_session(model_, frame, config_);
    theta_prev_ = session_.state.q.tail(session_.state.q.size() - 3);
    last_timestamp_ = frame.timestamp;
    FrameOutput out;
    out.timestamp = frame.timestamp;
    out.state = session_.state;
    out.contacts = contacts_;
    out.tau_star = VecX::Zero(model_.dof_count());
    ++frame_;
    return out;
  }
  const double gap = frame.timestamp - last_timestamp_;
  if (std::abs(gap - config_.tracking.dt) > config_.timestamp_tolerance) {
    throw ConfigurationError("frame " + std::to_string(frame_) + ": timestamp step " + std::to_string(gap) +
                             " s does not match dt");
  }
  last_timestamp_ = frame.timestamp;
  const VecX theta = reference_pose(frame);
  FrameOutput out;
  try {
    out = advance(frame, theta);
  } catch (const NumericalError& e) {
    // Keep going on the last good state.
    spdlog::warn("frame {}: dropped ({})", frame_, e.what());
    out.dropped = true;
    out.failure = e.what();
    out.state = session_.state;
    out.contacts = contacts_;
    out.tau_star = VecX::Zero(model_.dof_count());
  }
  out.frame = frame_;
  out.timestamp = frame.timestamp;
  theta_prev_ = theta;
  ++frame_;
  return out;
}

FrameOutput Pipeline::advance(const EstimatorFrame& frame, const VecX& theta) {
  const TrackingConfig& tc = config_.tracking;
  const double dt = tc.dt;
  const CharacterState& state = session_.state;

  const Vec3 v = assemble_velocity(frame.v_par_mag, frame.v_perp, model_.gravity_direction());
  const Vec3 v_refined = refine_velocity(model_, theta, theta_prev_, v, frame.s, dt);

  const FrameDynamics dyn = evaluate_frame_dynamics(model_, state);
  const VecX r_ref =
      build_reference(model_, theta, state.q.head<3>(), v_refined, dyn.positions, frame.s, dt);
  const PdTargets pd = dual_pd(tc, theta, state.q, state.qdot, r_ref, dyn.positions, dyn.velocities);
  const TrackingOutput pre = pretrack(tc, dyn, pd.theta_ddot, pd.r_ddot);

  const Vec6 residual = pre.tau.head<6>();
  const ContactSet marked =
      mark_contacts(model_, contacts_, frame.s, dyn.positions, session_.ground_height, config_.contact);
  ContactEstimate est =
      estimate_contacts(model_, state.q, marked, residual, session_.ground_height, config_.contact);

  const VecX r_ref_star = adjust_references(model_, r_ref, est.set, tc.d_th, tc.pull_factor);
  const VecX r_ddot_star = linear_pd(tc, r_ref_star, dyn.positions, dyn.velocities);
  const TrackingOutput re = retrack(tc, dyn, pd.theta_ddot, r_ddot_star, est.forces.generalized_force);

  const CharacterState next = integrate(state, re.qddot, dt, tc.integrator);
  if (!next.q.allFinite() || !next.qdot.allFinite()) throw NumericalError("integrated state is not finite");

  FrameOutput out;
  out.state = next;
  out.contacts = est.set;
  out.tau_star = re.tau;
  out.residual = residual;
  out.e = est.forces.e;
  out.e_norm = est.forces.e_norm;
  out.events = std::move(est.events);
  out.pretrack_report = pre.report;
  out.retrack_report = re.report;

  session_.state = next;
  contacts_ = est.set;
  return out;
}

std::vector<FrameOutput> run_pipeline(const SkeletonModel& model, const PipelineConfig& config,
                                      const std::vector<EstimatorFrame>& frames) {
  Pipeline p(model, config);
  std::vector<FrameOutput> out;
  out.reserve(frames.size());
  for (const EstimatorFrame& f : frames) out.push_back(p.step(f));
  return out;
}

}  // namespace phystrack
