#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "phystrack/contact.hpp"
#include "phystrack/tracking.hpp"
#include "phystrack/translation.hpp"

namespace phystrack {

struct PipelineConfig {
  std::string skeleton;  // empty means the bundled humanoid
  TrackingConfig tracking;
  ContactConfig contact;
  /// Apply the estimator's root-frame gravity to the reference root
  /// orientation when a frame carries one.
  bool gravity_correction = true;
  double timestamp_tolerance = 1e-6;  // [s]
  std::uint64_t seed = 0;  // used by input synthesis only; the tracker is deterministic

  /// Throws ConfigurationError.
  void validate() const;
};

struct Session {
  CharacterState state;
  double ground_height = 0.0;
};

/// Root at the origin, pose from the first frame, at rest; the ground is
/// the lowest joint.
Session initialize_session(const SkeletonModel& model, const EstimatorFrame& first,
                           const PipelineConfig& config = {});

struct FrameOutput {
  int frame = 0;
  double timestamp = 0.0;
  bool dropped = false;  // solver failed; previous state carried over
  std::string failure;
  CharacterState state;  // after integration
  ContactSet contacts;
  VecX tau_star;         // re-tracking generalized forces
  Vec6 residual = Vec6::Zero();  // pre-tracking root residual τ_{:6}
  Vec6 e = Vec6::Zero();         // left unexplained by the contacts
  double e_norm = 0.0;
  std::vector<ContactEvent> events;
  SolveReport pretrack_report, retrack_report;
};

/// Causal per-frame tracker: each call consumes one estimator frame.
class Pipeline {
 public:
  Pipeline(const SkeletonModel& model, PipelineConfig config);

  /// First call initializes the session and reports the initial state.
  FrameOutput step(const EstimatorFrame& frame);

  const Session& session() const { return session_; }
  int frames_seen() const { return frame_; }

 private:
  /// Reference pose with the root orientation corrected by the frame's
  /// gravity estimate.
  VecX reference_pose(const EstimatorFrame& frame) const;
  FrameOutput advance(const EstimatorFrame& frame, const VecX& theta);

  const SkeletonModel& model_;
  PipelineConfig config_;
  Session session_;
  ContactSet contacts_;
  VecX theta_prev_;
  double last_timestamp_ = 0.0;
  int frame_ = 0;
};

std::vector<FrameOutput> run_pipeline(const SkeletonModel& model, const PipelineConfig& config,
                                      const std::vector<EstimatorFrame>& frames);

}  // namespace phystrack
