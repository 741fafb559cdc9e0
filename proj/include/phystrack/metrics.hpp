#pragma once

#include <string>
#include <vector>

#include "phystrack/skeleton.hpp"

namespace phystrack {

enum class Alignment {
  kLocal,   // root position and orientation matched per frame
  kGlobal,  // root position matched per frame
};

struct ErrorStats {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation over frames
};

struct PoseErrors {
  ErrorStats sip_deg;  // global rotation error of hips and shoulders
  ErrorStats ang_deg;  // global rotation error of all joints
  ErrorStats pos_cm;   // joint position error
};

/// Per-frame errors averaged over joints, then summarized over frames.
/// Sequences are generalized coordinates of the same skeleton. SIP joints
/// are L_Hip, R_Hip, L_Shoulder and R_Shoulder; absent names are skipped.
PoseErrors pose_errors(const SkeletonModel& model, const std::vector<VecX>& pred,
                       const std::vector<VecX>& truth, Alignment alignment);

/// Mean magnitude of the third finite difference over dt³, in 10³ m/s³.
/// Needs at least four samples.
double jitter(const std::vector<Vec3>& track, double dt);
/// Same, averaged over every joint of a sequence of configurations.
double joint_jitter(const SkeletonModel& model, const std::vector<VecX>& q, double dt);

struct DriftPoint {
  double distance = 0.0;  // truth path length so far [m]
  double error = 0.0;     // |pred - truth| [m]
};

struct DriftReport {
  std::vector<DriftPoint> curve;
  double reference_distance = 7.0;  // where the percentage is taken [m]
  /// Error over distance at the reference distance, interpolated along the
  /// curve; taken at the end of the path when it is shorter.
  double percent = 0.0;
  bool reached_reference = false;
};

/// Root trajectories compared as given, without alignment.
DriftReport translation_drift(const std::vector<Vec3>& pred_root, const std::vector<Vec3>& truth_root,
                              double reference_distance = 7.0);

struct EvalReport {
  PoseErrors local;
  PoseErrors global;
  double root_jitter = 0.0;   // 10³ m/s³
  double joint_jitter = 0.0;  // 10³ m/s³
  DriftReport drift;
};

/// Both sequences are shifted so their first root position is the origin
/// before the drift and jitter are measured.
EvalReport evaluate(const SkeletonModel& model, const std::vector<VecX>& pred,
                    const std::vector<VecX>& truth, double dt, double reference_distance = 7.0);

/// Human-readable summary.
std::string format_report(const EvalReport& report);
/// "distance,error" rows with a header line.
std::string format_drift_csv(const DriftReport& drift);

}  // namespace phystrack
